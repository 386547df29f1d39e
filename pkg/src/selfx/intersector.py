"""Self-intersections of Laurent polynomial curves via resultants.

Pipeline: normalize, reject exceptional inputs, shear away the balanced case,
form the pairing polynomials g and g*, and eliminate z with the resultant.
Roots of the resultant near [-1, 1] seed Newton's method on the full system
``g = g* = 0``; solutions with real ``t`` in (-1, 1) and ``|z| = 1`` are
polished on the torus ``(theta, phi)`` and read off as parameter pairs
``{phi + theta, phi - theta}``.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import BoundViolation, ExceptionalInput, RangeError
from .laurent import (
    NOT_EXCEPTIONAL,
    LaurentPolynomial,
    detect_exceptional,
    normalize,
    reduce_balanced,
)
from .pairing import build_g, build_g_star, resultant_roots

TWO_PI = 2 * np.pi
#: resultant roots within this distance of [-1, 1] seed the solver
SEED_WINDOW = 0.05


@dataclass(frozen=True)
class ToleranceSet:
    """Tolerances of the resultant pipeline.

    Parameters
    ----------
    real : float
        A refined solution counts as real when ``|Im t| < real * (1 + |t|)``.
    unit : float
        ... and as lying on the circle when ``||z| - 1| < unit``.
    t_edge : float
        Roots with ``|t| > 1 - t_edge`` are dropped (the two points coincide).
    image : float
        A polished pair is accepted when ``|p(a) - p(b)| < image * (1 + max|p|)``.
    cluster : float
        Angle pairs closer than this (in both coordinates) are merged.
    balance : float
        Relative tolerance for the balanced-modulus exception.
    """

    real: float = 1e-7
    unit: float = 1e-7
    t_edge: float = 1e-9
    image: float = 1e-6
    cluster: float = 1e-6
    balance: float = 1e-9


DEFAULT_TOLERANCES = ToleranceSet()


@dataclass(frozen=True)
class SelfIntersection:
    """An unordered pair of circle parameters with a common image.

    ``{e^{i alpha}, e^{i beta}} = {e^{i theta} z, e^{-i theta} z}`` with
    ``t = cos(theta)``.
    """

    alpha: float
    beta: float
    image: complex
    t: float
    z: complex
    residual: float

    def to_json_dict(self):
        return {
            "alpha": float(self.alpha),
            "beta": float(self.beta),
            "image": [float(self.image.real), float(self.image.imag)],
            "t": float(self.t),
            "z": [float(self.z.real), float(self.z.imag)],
            "residual": float(self.residual),
        }


@dataclass
class AnalysisReport:
    """Result of :func:`self_intersections`."""

    input: LaurentPolynomial
    status: object
    intersections: list
    count: int
    bound: int
    reduced_via_psi: bool = False
    diagnostics: dict = field(default_factory=dict)
    raw_solutions: list = field(default_factory=list, repr=False)

    def to_json_dict(self):
        return {
            "input": self.input.to_json_dict(),
            "status": str(self.status),
            "count": self.count,
            "bound": self.bound,
            "reduced_via_psi": self.reduced_via_psi,
            "intersections": [s.to_json_dict() for s in self.intersections],
            "diagnostics": {k: v for k, v in self.diagnostics.items()},
        }


def upper_bound(n, m):
    """Maximal number of self-intersections of ``sum_{k=m}^{n} a_k z^k`` on the circle.

    ``(n-1)(n-(m+1)/2)`` (floored) for ``1 <= m < n``, ``(n-1)(n-m)`` for
    ``-n < m <= -1`` and ``(n-1)(2n-1)`` for ``m = -n``.

    Raises
    ------
    RangeError
        Unless ``-n <= m < n`` and ``m != 0``.
    """
    n, m = int(n), int(m)
    if m == 0 or not (-n <= m < n):
        raise RangeError(f"bound needs -n <= m < n and m != 0 (got n={n}, m={m})")
    if m >= 1:
        return (n - 1) * (2 * n - m - 1) // 2
    if m > -n:
        return (n - 1) * (n - m)
    return (n - 1) * (2 * n - 1)


def extremal(n, m, eps):
    """``z^n + eps z^m``, which has ``(n-1)(n-m)`` self-intersections for small eps.

    Raises
    ------
    RangeError
        Unless ``n > |m| >= 1``, ``gcd(n, m) = 1`` and ``eps > 0``.
    """
    n, m = int(n), int(m)
    if not (n > abs(m) >= 1):
        raise RangeError(f"need n > |m| >= 1 (got n={n}, m={m})")
    if gcd(n, abs(m)) != 1:
        raise RangeError(f"need gcd(n, m) = 1 (got gcd {gcd(n, abs(m))})")
    if not eps > 0:
        raise RangeError("eps must be positive")
    return LaurentPolynomial.from_dict({n: 1.0, m: float(eps)})


# torus Newton ----------------------------------------------------------------


def _polish_on_torus(g, theta, phi, iters=40):
    """Newton on ``g(cos theta, e^{i phi}) = 0`` as two real equations in two unknowns."""
    theta = np.array(theta, dtype=float)
    phi = np.array(phi, dtype=float)
    for _ in range(iters):
        t, z = np.cos(theta), np.exp(1j * phi)
        G = g(t, z)
        g_t, g_z = g.partials(t, z)
        j_theta = -np.sin(theta) * g_t
        j_phi = 1j * z * g_z
        # [Re; Im] system
        a, b = j_theta.real, j_phi.real
        c, d = j_theta.imag, j_phi.imag
        det = a * d - b * c
        with np.errstate(divide="ignore", invalid="ignore"):
            d_theta = (d * G.real - b * G.imag) / det
            d_phi = (-c * G.real + a * G.imag) / det
        ok = np.isfinite(d_theta) & np.isfinite(d_phi)
        d_theta = np.where(ok, np.clip(d_theta, -0.5, 0.5), 0)
        d_phi = np.where(ok, np.clip(d_phi, -0.5, 0.5), 0)
        theta = theta - d_theta
        phi = phi - d_phi
        if np.all(np.abs(d_theta) + np.abs(d_phi) < 1e-15):
            break
    # fold theta into [0, pi]: g depends on theta only through cos(theta)
    theta = np.mod(theta, TWO_PI)
    theta = np.where(theta > np.pi, TWO_PI - theta, theta)
    return theta, np.mod(phi, TWO_PI)


def cluster_pairs(pairs, radius):
    """Group angle pairs whose coordinates agree within ``radius`` on the torus.

    Returns an array of group labels.
    """
    pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
    if len(pairs) == 0:
        return np.zeros(0, dtype=int)
    tree = cKDTree(np.mod(pairs, TWO_PI), boxsize=TWO_PI)
    links = tree.query_pairs(radius, p=np.inf, output_type="ndarray")
    graph = coo_matrix(
        (np.ones(len(links)), (links[:, 0], links[:, 1])), shape=(len(pairs), len(pairs))
    )
    return connected_components(graph, directed=False)[1]


def _sorted_pair(a, b):
    a, b = np.mod(a, TWO_PI), np.mod(b, TWO_PI)
    return (a, b) if a <= b else (b, a)


def _polish_complex(g, g_star, t, z, iters=30):
    """Newton on the complex system ``g = g* = 0`` in the unknowns ``(t, z)``."""
    t = np.array(t, dtype=complex)
    z = np.array(z, dtype=complex)
    for _ in range(iters):
        f1, f2 = g(t, z), g_star(t, z)
        a, b = g.partials(t, z)
        c, d = g_star.partials(t, z)
        det = a * d - b * c
        with np.errstate(divide="ignore", invalid="ignore"):
            dt = (d * f1 - b * f2) / det
            dz = (-c * f1 + a * f2) / det
        ok = np.isfinite(dt) & np.isfinite(dz)
        size = np.abs(dt) + np.abs(dz)
        damp = np.where(size > 0.1, 0.1 / np.where(size > 0, size, 1), 1.0)
        dt = np.where(ok, dt * damp, 0)
        dz = np.where(ok, dz * damp, 0)
        t, z = t - dt, z - dz
        if np.all(np.abs(dt) + np.abs(dz) <= 1e-15 * (1 + np.abs(t) + np.abs(z))):
            break
    return t, z


def _seeds(g, g_star, seed, window=SEED_WINDOW):
    """Approximate common zeros ``(t, z)`` near the torus, from the resultant.

    Every root of the reduced resultant near the real segment is kept, and
    every z-root of ``g(t, .)`` at it becomes a seed.  Roots of the resultant
    can be badly conditioned where several solutions share nearly the same t,
    while the solutions themselves are not, so seeds are generous and are
    refined on the full system afterwards.
    """
    stride = g.z_stride()
    G, Gs = g.compress_z(stride), g_star.compress_z(stride)
    roots, converged = resultant_roots(G, Gs, seed)
    near = (np.abs(roots.imag) < window) & (np.abs(roots.real) < 1 + window)
    ts, zs = [], []
    for t in roots[near]:
        w_coeffs = G.z_coefficients(t)
        nz = np.flatnonzero(np.abs(w_coeffs) > 1e-14 * np.max(np.abs(w_coeffs)))
        if nz.size == 0 or nz[-1] == 0:
            continue
        for w in np.roots(w_coeffs[: nz[-1] + 1][::-1]):
            if w == 0 or abs(abs(w) - 1) > stride * window:
                continue
            base = w ** (1.0 / stride)
            for k in range(stride):
                ts.append(t)
                zs.append(base * np.exp(2j * np.pi * k / stride))
    diagnostics = {
        "stride": int(stride),
        "resultant_degree": int(roots.size * stride),
        "reduced_resultant_degree": int(roots.size),
        "root_finder_converged": bool(converged),
        "near_real_roots": int(np.count_nonzero(near)),
        "seeds": len(ts),
    }
    return np.array(ts, dtype=complex), np.array(zs, dtype=complex), diagnostics


def self_intersections(p, tol=DEFAULT_TOLERANCES, seed=0):
    """All self-intersections of ``p`` restricted to the unit circle.

    Parameters
    ----------
    p : LaurentPolynomial
    tol : ToleranceSet
    seed : int
        Seeds the root finder's starting configuration.

    Returns
    -------
    AnalysisReport

    Raises
    ------
    DegenerateInput
        For constant ``p``.
    ExceptionalInput
        When ``p`` is a polynomial in ``z^j`` (j >= 2) or balanced with equal
        extreme moduli; the set of self-intersections is then not finite.
    BoundViolation
        If more pairs are found than the theoretical bound.
    """
    q, log = normalize(p)
    status = detect_exceptional(q, tol.balance)
    if status.is_exceptional:
        raise ExceptionalInput(status)
    if q.n == q.m:
        # a z: injective on the circle
        return AnalysisReport(p, NOT_EXCEPTIONAL, [], 0, 0, False, {"stride": 0})
    bound = upper_bound(q.n, q.m)
    work, reduced = q, False
    if q.m == -q.n:
        work, reduced = reduce_balanced(q, tol.balance), True
        if work.n == work.m:
            # psi(p) is a single monomial, so p is injective
            return AnalysisReport(p, NOT_EXCEPTIONAL, [], 0, bound, True, {"stride": 0})
    g, g_star = build_g(work), build_g_star(work)

    ts, zs, diag = _seeds(g, g_star, seed)
    diag["reduced_via_psi"] = reduced
    ts, zs = _polish_complex(g, g_star, ts, zs)
    on_torus = (
        (np.abs(ts.imag) < tol.real * (1 + np.abs(ts)))
        & (np.abs(np.abs(zs) - 1) < tol.unit)
        & (np.abs(ts.real) < 1 - tol.t_edge)
    )
    diag["torus_solutions"] = int(np.count_nonzero(on_torus))
    thetas, phis = np.arccos(ts.real[on_torus]), np.angle(zs[on_torus])
    if thetas.size:
        thetas, phis = _polish_on_torus(g, thetas, phis)

    sup = p.sup_norm()
    accept_level = tol.image * (1 + sup)
    raw, pairs, info = [], [], []
    for theta, phi in zip(thetas, phis):
        t = float(np.cos(theta))
        if abs(t) >= 1 - tol.t_edge:
            continue
        a, b = log.map_angle(phi + theta), log.map_angle(phi - theta)
        pa, pb = p.on_circle(a), p.on_circle(b)
        residual = float(abs(pa - pb))
        if not residual < accept_level:
            continue
        z = np.exp(1j * phi)
        if log.conjugate_flipped:
            z = np.conj(z)
        raw.append((t, complex(z)))
        pairs.append(_sorted_pair(a, b))
        info.append((t, complex(z), complex(pa), residual))
    diag["raw_solutions"] = len(raw)

    labels = cluster_pairs(pairs, tol.cluster)
    found = []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        best = min(members, key=lambda i: info[i][3])
        alpha, beta = pairs[best]
        t, z, image, residual = info[best]
        found.append(SelfIntersection(float(alpha), float(beta), image, t, z, residual))
    found.sort(key=lambda s: (s.alpha, s.beta))
    diag["max_residual"] = max((s.residual for s in found), default=0.0)
    if len(found) > bound:
        raise BoundViolation(len(found), bound)
    return AnalysisReport(p, NOT_EXCEPTIONAL, found, len(found), bound, reduced, diag, raw)


def count_check(p, tol=DEFAULT_TOLERANCES, seed=0):
    """``(count, bound, count <= bound)`` for a non-exceptional ``p``."""
    report = self_intersections(p, tol, seed)
    return report.count, report.bound, report.count <= report.bound
