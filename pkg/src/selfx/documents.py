"""JSON documents for curves.

A document has a ``kind`` (``laurent``, ``samples`` or ``polyline``), a
kind-specific ``payload`` and a free-form string ``metadata`` map::

    {"kind": "laurent",  "payload": {"m": -1, "n": 2, "coeffs": [[1, 0], ...]}, "metadata": {}}
    {"kind": "samples",  "payload": {"theta": [...], "values": [[re, im], ...]}, "metadata": {}}
    {"kind": "polyline", "payload": {"points": [[re, im], ...], "params": [...]}, "metadata": {}}

Complex numbers are ``[re, im]`` pairs and angles are radians in [0, 2 pi).
Floats are written with Python's shortest round-trip formatting, so
``loads(dumps(doc))`` reproduces every number exactly.
"""

from dataclasses import dataclass, field
import json

import numpy as np

from .errors import DomainError
from .geometry import PlanarCurve
from .laurent import LaurentPolynomial

TWO_PI = 2 * np.pi
KINDS = ("laurent", "samples", "polyline")


@dataclass
class Samples:
    """Values of a closed curve at angles in [0, 2 pi)."""

    theta: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float).ravel()
        self.values = np.asarray(self.values, dtype=complex).ravel()
        if self.theta.size != self.values.size:
            raise DomainError("theta and values must have the same length")
        if self.theta.size < 3:
            raise DomainError("need at least 3 samples")
        if not (np.all(np.isfinite(self.theta)) and np.all(np.isfinite(self.values))):
            raise DomainError("samples must be finite")
        if np.any(self.theta < 0) or np.any(self.theta >= TWO_PI):
            raise DomainError("angles must lie in [0, 2 pi)")
        if np.any(np.diff(self.theta) <= 0):
            raise DomainError("angles must be strictly increasing")


@dataclass
class CurveDocument:
    """A curve together with its kind and metadata.

    ``payload`` is a :class:`LaurentPolynomial`, :class:`Samples` or
    :class:`PlanarCurve` according to ``kind``.
    """

    kind: str
    payload: object
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = {"laurent": LaurentPolynomial, "samples": Samples, "polyline": PlanarCurve}
        if self.kind not in expected:
            raise DomainError(f"unknown document kind {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.payload, expected[self.kind]):
            raise DomainError(f"payload of a {self.kind} document must be {expected[self.kind].__name__}")
        if not isinstance(self.metadata, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in self.metadata.items()
        ):
            raise DomainError("metadata must map strings to strings")

    def curve_points(self, samples=4096):
        """Points of the curve in traversal order (one period, not closed)."""
        if self.kind == "laurent":
            return self.payload.on_circle(TWO_PI * np.arange(samples) / samples)
        if self.kind == "samples":
            return self.payload.values
        return self.payload.points

    def to_json_dict(self):
        return {"kind": self.kind, "payload": _payload_to_json(self.kind, self.payload), "metadata": dict(self.metadata)}

    @classmethod
    def from_json_dict(cls, d):
        if not isinstance(d, dict):
            raise DomainError("document must be a JSON object")
        unknown = set(d) - {"kind", "payload", "metadata"}
        if unknown:
            raise DomainError(f"unknown document fields: {sorted(unknown)}")
        kind = d.get("kind")
        if kind not in KINDS:
            raise DomainError(f"unknown document kind {kind!r}; expected one of {KINDS}")
        if "payload" not in d:
            raise DomainError("document has no payload")
        return cls(kind, _payload_from_json(kind, d["payload"]), d.get("metadata", {}))


def _pairs(z):
    return [[float(w.real), float(w.imag)] for w in np.asarray(z, dtype=complex)]


def _complex_list(raw, name):
    if not isinstance(raw, list):
        raise DomainError(f"{name} must be a list of [re, im] pairs")
    out = np.empty(len(raw), dtype=complex)
    for k, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(x) for x in pair)):
            raise DomainError(f"{name}[{k}] must be a [re, im] pair of numbers")
        out[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{name} must be finite")
    return out


def _real_list(raw, name):
    if not (isinstance(raw, list) and all(_is_number(x) for x in raw)):
        raise DomainError(f"{name} must be a list of numbers")
    out = np.array(raw, dtype=float)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{name} must be finite")
    return out


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _payload_to_json(kind, payload):
    if kind == "laurent":
        return payload.to_json_dict()
    if kind == "samples":
        return {"theta": [float(t) for t in payload.theta], "values": _pairs(payload.values)}
    return {"points": _pairs(payload.points), "params": [float(t) for t in payload.params]}


def _payload_from_json(kind, raw):
    if not isinstance(raw, dict):
        raise DomainError("payload must be a JSON object")
    if kind == "laurent":
        return LaurentPolynomial.from_json_dict(raw)
    if kind == "samples":
        return Samples(_real_list(raw.get("theta"), "theta"), _complex_list(raw.get("values"), "values"))
    points = _complex_list(raw.get("points"), "points")
    params = _real_list(raw.get("params"), "params")
    try:
        return PlanarCurve(points, params)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def dumps(doc):
    """Serialize a document to JSON text."""
    return json.dumps(doc.to_json_dict(), allow_nan=False)


def loads(text):
    """Parse and validate JSON text into a :class:`CurveDocument`."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed JSON: {exc}") from exc
    return CurveDocument.from_json_dict(raw)


def read_document(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def laurent_document(p, **metadata):
    return CurveDocument("laurent", p, {k: str(v) for k, v in metadata.items()})


def samples_document(theta, values, **metadata):
    return CurveDocument("samples", Samples(theta, values), {k: str(v) for k, v in metadata.items()})


def polyline_document(curve, **metadata):
    return CurveDocument("polyline", curve, {k: str(v) for k, v in metadata.items()})
