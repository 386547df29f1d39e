"""Laurent polynomials on the unit circle.

A Laurent polynomial ``p(z) = sum_{k=m}^{n} a_k z^k`` is stored as a dense
coefficient vector over the exponent range ``[m, n]``.  On the unit circle it
is a trigonometric polynomial, and its self-intersections are the subject of
the rest of the package.
"""

from dataclasses import dataclass, field
from math import gcd
import json

import numpy as np

from .errors import (
    BalancedModulusError,
    DegenerateInput,
    DomainError,
    InsufficientSamples,
)

#: relative threshold below which coefficients count as zero
TRIM_RTOL = 1e-14
#: default relative tolerance for the balanced-modulus exception
TOL_BALANCE = 1e-9


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """Immutable Laurent polynomial ``sum_{k=m}^{n} a_k z^k``.

    Coefficients with modulus at most ``1e-14 * max|a_k|`` are set to zero and
    the exponent range is trimmed so that ``a_m`` and ``a_n`` are nonzero.  The
    zero polynomial is represented with ``m = n = 0`` and ``coeffs == [0]``.

    Parameters
    ----------
    coeffs : array_like of complex
        Coefficients ``a_m, a_{m+1}, ..., a_n``.
    m : int
        Exponent of ``coeffs[0]``.
    """

    coeffs: np.ndarray
    m: int = 0
    n: int = field(init=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        scale = np.max(np.abs(c))
        m = int(self.m)
        if scale == 0:
            c, m = np.zeros(1, dtype=complex), 0
        else:
            c[np.abs(c) <= TRIM_RTOL * scale] = 0
            nz = np.flatnonzero(c)
            c = c[nz[0]:nz[-1] + 1].copy()
            m += int(nz[0])
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", m + c.size - 1)

    # construction helpers -------------------------------------------------

    @classmethod
    def from_dict(cls, terms):
        """Build from a mapping ``{exponent: coefficient}``."""
        terms = {int(k): complex(v) for k, v in terms.items() if v != 0}
        if not terms:
            return cls([0.0], 0)
        lo, hi = min(terms), max(terms)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in terms.items():
            c[k - lo] += v
        return cls(c, lo)

    @classmethod
    def monomial(cls, k, a=1.0):
        return cls([a], k)

    # basic protocol -------------------------------------------------------

    @property
    def exponents(self):
        return np.arange(self.m, self.n + 1)

    def __getitem__(self, k):
        """Coefficient of ``z^k`` (zero outside the stored range)."""
        if self.m <= k <= self.n:
            return complex(self.coeffs[k - self.m])
        return 0j

    def as_dict(self):
        return {int(k): complex(a) for k, a in zip(self.exponents, self.coeffs) if a != 0}

    def support(self):
        return [int(k) for k, a in zip(self.exponents, self.coeffs) if a != 0]

    def is_zero(self):
        return not np.any(self.coeffs)

    def is_constant(self):
        return all(k == 0 for k in self.support())

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.m, self.coeffs.tobytes()))

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial([other], 0)
        d = self.as_dict()
        for k, v in other.as_dict().items():
            d[k] = d.get(k, 0) + v
        return LaurentPolynomial.from_dict(d)

    __radd__ = __add__

    def __mul__(self, s):
        if isinstance(s, LaurentPolynomial):
            return NotImplemented
        return LaurentPolynomial(self.coeffs * complex(s), self.m)

    __rmul__ = __mul__

    def __repr__(self):
        if self.is_zero():
            return "LaurentPolynomial(0)"
        terms = []
        for k, a in self.as_dict().items():
            a = complex(a)
            coef = f"{a.real:g}" if a.imag == 0 else f"({a.real:g}{a.imag:+g}j)"
            terms.append(coef if k == 0 else f"{coef}*z^{k}")
        return "LaurentPolynomial(" + " + ".join(terms) + ")"

    # calculus -------------------------------------------------------------

    def derivative(self):
        """d/dz of the polynomial."""
        if self.is_zero():
            return self
        k = self.exponents
        return LaurentPolynomial(self.coeffs * k, self.m - 1)

    def substitute_power(self, j):
        """Return ``p(z^j)`` for a nonzero integer j."""
        j = int(j)
        if j == 0:
            raise DomainError("power must be nonzero")
        return LaurentPolynomial.from_dict({k * j: a for k, a in self.as_dict().items()})

    def on_circle(self, theta):
        """Values ``p(e^{i theta})``."""
        return evaluate(self, np.exp(1j * np.asarray(theta, dtype=float)))

    def sup_norm(self, samples=4096):
        """max |p| over a uniform grid on the circle."""
        theta = 2 * np.pi * np.arange(samples) / samples
        return float(np.max(np.abs(self.on_circle(theta))))

    # serialization --------------------------------------------------------

    def to_json_dict(self):
        return {
            "m": self.m,
            "n": self.n,
            "coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, d):
        try:
            m, n, raw = int(d["m"]), int(d["n"]), d["coeffs"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed Laurent document: {exc}") from exc
        if len(raw) != n - m + 1:
            raise DomainError("coeffs length must equal n - m + 1")
        vals = []
        for pair in raw:
            if isinstance(pair, (int, float)):
                pair = [pair, 0.0]
            if len(pair) != 2:
                raise DomainError("each coefficient must be [re, im]")
            re, im = float(pair[0]), float(pair[1])
            if not (np.isfinite(re) and np.isfinite(im)):
                raise DomainError("coefficients must be finite")
            vals.append(complex(re, im))
        return cls(vals, m)

    def dumps(self):
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text):
        return cls.from_json_dict(json.loads(text))


def evaluate(p, z):
    """Evaluate ``p`` at nonzero ``z``.

    Nonnegative exponents are summed by Horner's rule in ``z`` and negative
    ones by Horner's rule in ``1/z``.

    Raises
    ------
    DomainError
        If any ``z`` is zero.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("Laurent polynomial evaluated at z = 0")
    c = p.coeffs
    out = np.zeros(z.shape, dtype=complex)
    # k >= 0 part: a_{max(m,0)} .. a_n
    lo = max(p.m, 0)
    if p.n >= 0:
        pos = c[lo - p.m:]
        acc = np.zeros(z.shape, dtype=complex)
        for a in pos[::-1]:
            acc = acc * z + a
        out += acc * z**lo if lo > 0 else acc
    if p.m < 0:
        hi = min(p.n, -1)
        neg = c[: hi - p.m + 1]  # a_m .. a_hi
        w = 1 / z
        acc = np.zeros(z.shape, dtype=complex)
        for a in neg:  # a_m first: highest power of w
            acc = acc * w + a
        out += acc * w ** (-hi)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class NormalizationLog:
    """Record of the transform applied by :func:`normalize`.

    Parameters
    ----------
    conjugate_flipped : bool
        Whether ``z -> 1/z`` was applied; circle parameters change sign.
    constant_dropped : complex
        The removed constant term.
    """

    conjugate_flipped: bool
    constant_dropped: complex

    def invert(self, p):
        """Recover the original polynomial from the normalized one."""
        d = p.as_dict()
        if self.conjugate_flipped:
            d = {-k: a for k, a in d.items()}
        if self.constant_dropped != 0:
            d[0] = d.get(0, 0) + self.constant_dropped
        return LaurentPolynomial.from_dict(d)

    def map_angle(self, theta):
        """Map a circle parameter of the normalized polynomial back to the input."""
        theta = np.asarray(theta, dtype=float)
        if self.conjugate_flipped:
            theta = -theta
        return np.mod(theta, 2 * np.pi)


def normalize(p):
    """Drop the constant term and flip ``z -> 1/z`` if needed so ``n >= |m|``.

    Returns
    -------
    (LaurentPolynomial, NormalizationLog)

    Raises
    ------
    DegenerateInput
        If ``p`` is constant.
    """
    if p.is_constant():
        raise DegenerateInput("constant polynomial: the image of the circle is a point")
    d = p.as_dict()
    const = d.pop(0, 0j)
    q = LaurentPolynomial.from_dict(d)
    flipped = q.n < abs(q.m)
    if flipped:
        q = LaurentPolynomial.from_dict({-k: a for k, a in d.items()})
    return q, NormalizationLog(flipped, complex(const))


def is_normalized(p):
    return not p.is_constant() and p[0] == 0 and p.n >= abs(p.m)


def support_gcd(p):
    """gcd of ``|k|`` over the nonzero coefficients (the constant is ignored).

    ``p`` is a polynomial in ``z^j`` exactly when ``j`` divides the result.
    """
    g = 0
    for k in p.support():
        g = gcd(g, abs(k))
    return g


@dataclass(frozen=True)
class ExceptionalStatus:
    """Outcome of :func:`detect_exceptional`.

    ``kind`` is one of ``"None"``, ``"PowerSubstitution"`` or
    ``"BalancedModulus"``; ``j`` is set for power substitution.
    """

    kind: str = "None"
    j: int = 0

    @property
    def is_exceptional(self):
        return self.kind != "None"

    def __str__(self):
        if self.kind == "PowerSubstitution":
            return f"PowerSubstitution({self.j})"
        return self.kind


NOT_EXCEPTIONAL = ExceptionalStatus()


def detect_exceptional(p, tol_balance=TOL_BALANCE):
    """Classify ``p`` against the two exceptional cases of the count bound.

    A polynomial in ``z^j`` with ``j >= 2`` traces its curve several times; a
    balanced polynomial (``n = -m`` and ``|a_n| = |a_m|``) may trace a segment
    back and forth.  Both give uncountably many self-intersections.
    """
    j = support_gcd(p)
    if j >= 2:
        return ExceptionalStatus("PowerSubstitution", j)
    if p.n == -p.m and p.n > 0:
        an, am = abs(p[p.n]), abs(p[p.m])
        if abs(an - am) <= tol_balance * max(an, am):
            return ExceptionalStatus("BalancedModulus")
    return NOT_EXCEPTIONAL


def balanced_shear(p):
    """The constant ``c = -a_{-n} / conj(a_n)`` of the balancing map."""
    return -p[-p.n] / np.conj(p[p.n])


def psi(w, c):
    """The real-linear map ``w -> w + c * conj(w)``."""
    return w + c * np.conj(w)


def psi_inverse(w, c):
    return (w - c * np.conj(w)) / (1 - abs(c) ** 2)


def reduce_balanced(p, tol_balance=TOL_BALANCE):
    """Compose ``p`` with the shear ``psi`` that kills the ``z^{-n}`` term.

    On the circle ``conj(z^k) = z^{-k}``, so ``psi(p(z))`` is again a Laurent
    polynomial with coefficients ``a_k + c * conj(a_{-k})``.  Since ``psi`` is a
    bijection of the plane, the self-intersection pairs are unchanged.

    A polynomial with ``a_{-n} = 0`` (``m > -n``) is returned unchanged.

    Raises
    ------
    DomainError
        Unless ``p`` is normalized (``n > 0`` and ``m >= -n``).
    BalancedModulusError
        When ``|c| = 1`` within ``tol_balance``.
    """
    n = p.n
    if n <= 0 or p.m < -n:
        raise DomainError("reduce_balanced needs a normalized polynomial (n > 0, m >= -n)")
    if p.m > -n:
        return p
    c = balanced_shear(p)
    if abs(abs(c) - 1) <= tol_balance:
        raise BalancedModulusError("|a_n| = |a_{-n}|: the shear is singular")
    if c == 0:
        return p
    k = np.arange(-n, n + 1)
    a = np.array([p[int(j)] for j in k])
    b = a + c * np.conj(a[::-1])
    b[0] = 0  # z^{-n}: vanishes by the choice of c
    return LaurentPolynomial(b, -n)


# sampling and Fourier analysis -------------------------------------------


def _uniform_grid(theta, values):
    """Sort samples and, if the angles are not uniform, resample linearly."""
    theta = np.mod(np.asarray(theta, dtype=float), 2 * np.pi)
    values = np.asarray(values, dtype=complex)
    if theta.shape != values.shape or theta.ndim != 1:
        raise DomainError("angles and values must be 1-D arrays of equal length")
    order = np.argsort(theta, kind="stable")
    theta, values = theta[order], values[order]
    N = theta.size
    if N < 2:
        return theta, values
    step = np.diff(np.r_[theta, theta[0] + 2 * np.pi])
    if np.allclose(step, 2 * np.pi / N, rtol=0, atol=1e-9):
        return theta, values
    grid = theta[0] + 2 * np.pi * np.arange(N) / N
    ext_t = np.r_[theta, theta[0] + 2 * np.pi]
    ext_v = np.r_[values, values[0]]
    re = np.interp(grid, ext_t, ext_v.real)
    im = np.interp(grid, ext_t, ext_v.imag)
    return np.mod(grid, 2 * np.pi), re + 1j * im


def fourier_coefficients(theta, values, k_range):
    """Rectangle-rule Fourier coefficients on a uniform periodic grid.

    Approximates ``(1/2pi) int f(e^{i x}) e^{-ikx} dx`` for ``k`` in the
    inclusive range ``k_range = (kmin, kmax)``.
    """
    theta, values = _uniform_grid(theta, values)
    kmin, kmax = int(k_range[0]), int(k_range[1])
    k = np.arange(kmin, kmax + 1)
    out = np.empty(k.size, dtype=complex)
    # chunk to bound memory for long grids
    step = max(1, 2**22 // max(theta.size, 1))
    for s in range(0, k.size, step):
        kk = k[s:s + step]
        out[s:s + step] = np.exp(-1j * np.outer(kk, theta)) @ values / theta.size
    return out


def fit_from_samples(theta, values, m, n):
    """Discrete Fourier truncation of circle samples to exponents ``m..n``.

    Exact when the samples come from a Laurent polynomial whose exponents lie in
    ``[m, n]``.

    Raises
    ------
    InsufficientSamples
        If fewer than ``2 (n - m + 1)`` samples are given.
    """
    m, n = int(m), int(n)
    if n < m:
        raise DomainError("empty exponent range")
    if np.size(theta) < 2 * (n - m + 1):
        raise InsufficientSamples(
            f"need at least {2 * (n - m + 1)} samples for range [{m}, {n}], got {np.size(theta)}"
        )
    return LaurentPolynomial(fourier_coefficients(theta, values, (m, n)), m)


def sample(p, count, offset=0.0):
    """Uniform samples ``(theta, p(e^{i theta}))`` on the circle."""
    theta = offset + 2 * np.pi * np.arange(count) / count
    return np.mod(theta, 2 * np.pi), p.on_circle(theta)
