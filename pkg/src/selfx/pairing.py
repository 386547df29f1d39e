"""Pairing polynomials g, g* and their resultant in z.

For ``p(z) = sum_{k=m}^{n} a_k z^k`` and ``t = cos(theta)``,

    g(t, z)  = sum_k a_k U_{k-1}(t) z^{k-m}
    g*(t, z) = sum_k conj(a_k) U_{k-1}(t) z^{n-k}

so that ``g(t, z) = z^{-m} (p(e^{i theta} z) - p(e^{-i theta} z)) / (2i sin theta)``.
A self-intersection ``{e^{i theta} z, e^{-i theta} z}`` is a common zero of g and
g* with real ``t`` in (-1, 1) and ``|z| = 1``.

Both polynomials are stored with their t-dependence in the Chebyshev U basis,
which keeps evaluation stable; monomial coefficients are available on demand.
"""

from dataclasses import dataclass, field
from functools import reduce
from math import gcd

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .chebyshev import _reflect, u_coeffs
from .roots import determinant_roots
from .errors import DomainError, RangeError, SingularSystem

TRIM_RTOL = 1e-14
#: extra Chebyshev nodes beyond the expected degree, so the degree is measured
INTERP_GUARD = 8
#: all sampled determinants below this fraction of the row-norm product => singular
SINGULAR_RTOL = 1e-10
#: radius of the sampling circle for monomial coefficients of the resultant
RESULTANT_RADIUS = 2.0


def _u_derivative_table(kmax, t):
    """Values and t-derivatives of U_0..U_kmax, each of shape ``(kmax+1,) + t.shape``."""
    t = np.asarray(t)
    dtype = np.result_type(t, float)
    u = np.zeros((kmax + 1,) + t.shape, dtype=dtype)
    du = np.zeros_like(u)
    u[0] = 1.0
    if kmax >= 1:
        u[1] = 2 * t
        du[1] = 2.0
    for k in range(2, kmax + 1):
        u[k] = 2 * t * u[k - 1] - u[k - 2]
        du[k] = 2 * u[k - 1] + 2 * t * du[k - 1] - du[k - 2]
    return u, du


def _u_to_monomial(kmax):
    """Matrix M with column k holding the monomial coefficients of U_k."""
    M = np.zeros((kmax + 1, kmax + 1))
    for k in range(kmax + 1):
        M[: k + 1, k] = u_coeffs(k).coeffs
    return M


@dataclass(frozen=True, eq=False)
class BivariatePolynomial:
    """``sum_{i,j} ucoeffs[i, j] U_i(t) z^j``.

    Parameters
    ----------
    ucoeffs : numpy.ndarray
        Complex array of shape ``(deg_t + 1, deg_z + 1)``; row ``i`` multiplies
        the Chebyshev polynomial U_i.

    Notes
    -----
    ``coeffs`` gives the monomial form ``c[i][j] t^i z^j``.  It is exact in
    exact arithmetic but badly conditioned for large ``deg_t``; evaluation
    never goes through it.
    """

    ucoeffs: np.ndarray
    deg_t: int = field(init=False)
    deg_z: int = field(init=False)

    def __post_init__(self):
        c = np.array(self.ucoeffs, dtype=complex)
        if c.ndim != 2:
            raise DomainError("ucoeffs must be 2-D")
        scale = np.max(np.abs(c)) if c.size else 0.0
        if scale > 0:
            c[np.abs(c) <= TRIM_RTOL * scale] = 0
            rows = np.flatnonzero(np.any(c != 0, axis=1))
            cols = np.flatnonzero(np.any(c != 0, axis=0))
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        else:
            c = np.zeros((1, 1), dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "ucoeffs", c)
        object.__setattr__(self, "deg_t", c.shape[0] - 1)
        object.__setattr__(self, "deg_z", c.shape[1] - 1)

    @property
    def coeffs(self):
        """Dense monomial coefficients ``c[i][j]`` of ``t^i z^j``."""
        return _u_to_monomial(self.deg_t) @ self.ucoeffs

    @property
    def total_degree(self):
        """Largest ``i + j`` over nonzero monomials ``t^i z^j``."""
        c = self.coeffs
        scale = np.max(np.abs(c))
        if scale == 0:
            return -1
        i, j = np.nonzero(np.abs(c) > 1e-12 * scale)
        return int(np.max(i + j))

    def z_coefficients(self, t):
        """Coefficients of the polynomial in z at fixed t, shape ``t.shape + (deg_z+1,)``."""
        t = np.asarray(t)
        u, _ = _u_derivative_table(self.deg_t, t)
        return np.tensordot(np.moveaxis(u, 0, -1), self.ucoeffs, axes=1)

    def z_coefficients_dt(self, t):
        """t-derivatives of :meth:`z_coefficients`."""
        t = np.asarray(t)
        _, du = _u_derivative_table(self.deg_t, t)
        return np.tensordot(np.moveaxis(du, 0, -1), self.ucoeffs, axes=1)

    def _horner(self, rows, z):
        acc = np.zeros(np.broadcast(rows[..., 0], z).shape, dtype=complex)
        for j in range(self.deg_z, -1, -1):
            acc = acc * z + rows[..., j]
        return acc

    def __call__(self, t, z):
        t, z = np.broadcast_arrays(np.asarray(t), np.asarray(z, dtype=complex))
        out = self._horner(self.z_coefficients(t), z)
        return out[()] if out.ndim == 0 else out

    def partials(self, t, z):
        """``(d/dt, d/dz)`` at the given points."""
        t, z = np.broadcast_arrays(np.asarray(t), np.asarray(z, dtype=complex))
        u, du = _u_derivative_table(self.deg_t, t)
        rows_dt = np.tensordot(np.moveaxis(du, 0, -1), self.ucoeffs, axes=1)
        rows = np.tensordot(np.moveaxis(u, 0, -1), self.ucoeffs, axes=1)
        g_t = self._horner(rows_dt, z)
        j = np.arange(1, self.deg_z + 1)
        drows = rows[..., 1:] * j if self.deg_z > 0 else np.zeros(rows.shape[:-1] + (1,))
        if self.deg_z > 0:
            acc = np.zeros(z.shape, dtype=complex)
            for jj in range(self.deg_z - 1, -1, -1):
                acc = acc * z + drows[..., jj]
            g_z = acc
        else:
            g_z = np.zeros(z.shape, dtype=complex)
        return (g_t[()] if g_t.ndim == 0 else g_t), (g_z[()] if g_z.ndim == 0 else g_z)

    def z_stride(self):
        """gcd of the z-exponents present (0 for a z-free polynomial)."""
        cols = np.flatnonzero(np.any(self.ucoeffs != 0, axis=0))
        return reduce(gcd, (int(j) for j in cols), 0)

    def compress_z(self, d):
        """Substitute ``w = z^d``: requires every z-exponent to be divisible by d."""
        d = int(d)
        cols = np.flatnonzero(np.any(self.ucoeffs != 0, axis=0))
        if d < 1 or np.any(cols % d):
            raise DomainError(f"z-exponents are not all multiples of {d}")
        return BivariatePolynomial(self.ucoeffs[:, ::d])


@dataclass(frozen=True, eq=False)
class UnivariatePolynomial:
    """Polynomial in t stored in a scaled monomial basis.

    The represented polynomial is ``exp(log_scale) * sum_k scaled[k] (t / radius)^k``.
    Resultants easily overflow doubles, so the scale is carried separately.

    Parameters
    ----------
    scaled : numpy.ndarray
        Ascending coefficients in the variable ``t / radius``.
    radius : float
    log_scale : float
    cheb : numpy.ndarray, optional
        Chebyshev-T coefficients of ``exp(-cheb_log_scale) * R`` on [-1, 1].
        This form is accurate to rounding relative to ``max |R|`` on [-1, 1]
        and is the one used to locate real roots there.
    cheb_log_scale : float
    """

    scaled: np.ndarray
    radius: float = 1.0
    log_scale: float = 0.0
    cheb: np.ndarray = None
    cheb_log_scale: float = 0.0

    def __post_init__(self):
        c = np.array(self.scaled, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "scaled", c)
        if self.cheb is not None:
            ch = np.array(self.cheb, dtype=complex).ravel()
            ch.setflags(write=False)
            object.__setattr__(self, "cheb", ch)

    @property
    def degree(self):
        nz = np.flatnonzero(self.scaled)
        return int(nz[-1]) if nz.size else -1

    @property
    def coeffs(self):
        """Ascending monomial coefficients in t (may overflow for large systems)."""
        k = np.arange(self.scaled.size)
        return self.scaled * np.exp(self.log_scale - k * np.log(self.radius))

    @property
    def log_abs_leading(self):
        """``log |leading monomial coefficient|``."""
        d = self.degree
        if d < 0:
            return -np.inf
        return float(np.log(abs(self.scaled[d])) + self.log_scale - d * np.log(self.radius))

    @property
    def leading_coefficient(self):
        d = self.degree
        if d < 0:
            return 0j
        return self.coeffs[d]

    def relative_leading(self):
        """``|leading coefficient| / max |coefficient|`` in the scaled basis."""
        d = self.degree
        if d < 0:
            return 0.0
        return float(abs(self.scaled[d]) / np.max(np.abs(self.scaled)))

    def __call__(self, t):
        """Evaluate; real t in [-1, 1] use the Chebyshev form when available."""
        t = np.asarray(t, dtype=complex)
        s = t / self.radius
        acc = np.zeros(s.shape, dtype=complex)
        for a in self.scaled[::-1]:
            acc = acc * s + a
        out = acc * np.exp(self.log_scale)
        if self.cheb is not None:
            on_interval = (t.imag == 0) & (np.abs(t.real) <= 1)
            if np.any(on_interval):
                vals = npcheb.chebval(t.real[on_interval], self.cheb)
                out[on_interval] = vals * np.exp(self.cheb_log_scale)
        return out[()] if out.ndim == 0 else out


# construction ----------------------------------------------------------------


def _check_range(p):
    m, n = p.m, p.n
    if p[0] != 0 or m == 0 or not (-n < m <= n) or n < 1:
        raise RangeError(
            f"pairing polynomials need a normalized p with -n < m <= n, m != 0 (got m={m}, n={n})"
        )


def _assemble(p, z_exponent, conjugate):
    m, n = p.m, p.n
    rows = max(n - 1, abs(m) - 1, 0) + 1
    u = np.zeros((rows, n - m + 1), dtype=complex)
    for k, a in p.as_dict().items():
        sign, idx = _reflect(k - 1)
        if idx < 0:
            continue
        u[idx, z_exponent(k)] += sign * (np.conj(a) if conjugate else a)
    return BivariatePolynomial(u)


def build_g(p):
    """``g(t, z) = sum_k a_k U_{k-1}(t) z^{k-m}``.

    Raises
    ------
    RangeError
        Unless ``p`` is normalized with ``-n < m <= n`` and ``m != 0``.

    Examples
    --------
    For ``p = z^2 + z^{-1}`` this is ``2t z^3 - 1``.
    """
    _check_range(p)
    return _assemble(p, lambda k: k - p.m, conjugate=False)


def build_g_star(p):
    """``g*(t, z) = sum_k conj(a_k) U_{k-1}(t) z^{n-k}``, i.e. ``z^{n-m} conj(g(conj t, 1/conj z))``."""
    _check_range(p)
    return _assemble(p, lambda k: p.n - k, conjugate=True)


def verify_identity(p, theta, z):
    """Residual of the defining identity of g at ``(cos theta, z)``.

    Returns ``|g(cos theta, z) - z^{-m} (p(e^{i theta} z) - p(e^{-i theta} z)) / (2i sin theta)|``,
    elementwise for array input.

    Raises
    ------
    DomainError
        When ``sin(theta)`` vanishes.
    """
    theta = np.asarray(theta, dtype=float)
    z = np.asarray(z, dtype=complex)
    s = np.sin(theta)
    if np.any(np.abs(s) < 1e-14):
        raise DomainError("identity is undefined where sin(theta) = 0")
    g = build_g(p)
    e = np.exp(1j * theta)
    rhs = z ** (-p.m) * (p(e * z) - p(z / e)) / (2j * s)
    out = np.abs(g(np.cos(theta), z) - rhs)
    return out[()] if out.ndim == 0 else out


# resultant -------------------------------------------------------------------


def sylvester_matrix(f, h):
    """Sylvester matrix of two polynomials given by ascending coefficient arrays.

    The trailing axis holds coefficients; leading axes are batch dimensions.
    Rows are the descending-order coefficient vectors of f shifted ``deg h``
    times, followed by those of h shifted ``deg f`` times.
    """
    f = np.asarray(f)
    h = np.asarray(h)
    a, b = f.shape[-1] - 1, h.shape[-1] - 1
    size = a + b
    batch = np.broadcast_shapes(f.shape[:-1], h.shape[:-1])
    S = np.zeros(batch + (size, size), dtype=np.result_type(f, h, float))
    fd, hd = f[..., ::-1], h[..., ::-1]
    for r in range(b):
        S[..., r, r:r + a + 1] = fd
    for r in range(a):
        S[..., b + r, r:r + b + 1] = hd
    return S


def _log_determinants(g, g_star, t):
    """Row-scaled ``(phase, log|det|, log row-norm product)`` of the Sylvester matrix at each t."""
    S = sylvester_matrix(g.z_coefficients(t), g_star.z_coefficients(t))
    norms = np.max(np.abs(S), axis=-1)
    norms = np.where(norms > 0, norms, 1.0)
    sign, logabs = np.linalg.slogdet(S / norms[..., None])
    lognorm = np.sum(np.log(norms), axis=-1)
    log_hadamard = np.sum(np.log(np.linalg.norm(S, axis=-1) + 1e-300), axis=-1)
    return sign, logabs, lognorm, log_hadamard


def sylvester_determinant(g, g_star, t):
    """Direct ``Res_z(g, g*)`` at the given t values (may overflow for large systems)."""
    sign, logabs, lognorm, _ = _log_determinants(g, g_star, np.asarray(t))
    return sign * np.exp(logabs + lognorm)


def resultant_roots(g, g_star, seed=0, max_sweeps=200):
    """All roots of ``Res_z(g, g*)`` by Aberth-Ehrlich on the Sylvester determinant.

    The determinant is never expanded: each Newton correction comes from an
    LU solve with the Sylvester matrix and its t-derivative, so roots stay
    accurate even where the resultant's coefficients have lost all relative
    precision.

    Returns
    -------
    roots : numpy.ndarray
    converged : bool
    """

    def matrices(t):
        S = sylvester_matrix(g.z_coefficients(t), g_star.z_coefficients(t))
        dS = sylvester_matrix(g.z_coefficients_dt(t), g_star.z_coefficients_dt(t))
        return S, dS

    return determinant_roots(matrices, expected_degree(g, g_star), seed, max_sweeps)


def expected_degree(g, g_star):
    """Degree bound ``deg_z(g) * deg_t(g*) + deg_z(g*) * deg_t(g)`` for the resultant."""
    return g.deg_z * g_star.deg_t + g_star.deg_z * g.deg_t


def _scaled_samples(g, g_star, t):
    sign, logabs, lognorm, log_hadamard = _log_determinants(g, g_star, t)
    logdet = logabs + lognorm
    finite = np.isfinite(logdet) & (sign != 0)
    shift = float(np.max(logdet[finite])) if np.any(finite) else 0.0
    values = np.where(finite, sign * np.exp(np.where(finite, logdet, 0) - shift), 0)
    singular = np.all(~finite | (logdet - log_hadamard < np.log(SINGULAR_RTOL)))
    return values, shift, singular


def _trim(coef, size):
    """Drop trailing coefficients at rounding level relative to the largest."""
    scale = np.max(np.abs(coef))
    noise = 1e3 * np.finfo(float).eps * np.sqrt(size) * scale
    nz = np.flatnonzero(np.abs(coef) > noise)
    return coef[: nz[-1] + 1] if nz.size else coef[:1] * 0


def resultant_in_z(g, g_star, guard=INTERP_GUARD, radius=RESULTANT_RADIUS):
    """``Res_z(g, g*)`` as a polynomial in t, by evaluation and interpolation.

    The Sylvester determinant is sampled at ``D + 1 + guard`` points, with
    ``D`` the a-priori degree bound, so that the degree is measured rather than
    assumed: coefficients beyond the true degree come out at rounding level and
    are trimmed.  Two interpolants are formed:

    * monomial coefficients, by FFT of samples on the circle ``|t| = radius``;
    * Chebyshev-T coefficients, from samples at Chebyshev points of [-1, 1],
      which resolve the real roots that matter for self-intersections.

    Raises
    ------
    SingularSystem
        If every sampled determinant is negligible against the product of the
        row norms, i.e. g and g* share a factor.
    """
    if g.deg_z + g_star.deg_z == 0:
        raise DomainError("resultant needs at least one polynomial of positive z-degree")
    size = expected_degree(g, g_star) + 1 + guard

    circle = radius * np.exp(2j * np.pi * np.arange(size) / size)
    values, shift, singular_c = _scaled_samples(g, g_star, circle)
    nodes = npcheb.chebpts1(size)
    cvalues, cshift, singular_r = _scaled_samples(g, g_star, nodes)
    if singular_c and singular_r:
        raise SingularSystem("resultant vanishes identically: g and g* share a factor")

    scaled = _trim(np.fft.fft(values) / size, size)
    cheb = _trim(_cheb_fit(cvalues), size)
    return UnivariatePolynomial(scaled, radius, shift, cheb, cshift)


def _cheb_fit(values):
    """Chebyshev-T interpolation coefficients at first-kind nodes (``chebpts1`` order)."""
    N = values.size
    # chebpts1 returns nodes in ascending order: x_j = -cos(pi (j + 1/2) / N)
    k = np.arange(N)
    j = np.arange(N)
    ang = np.pi * (j + 0.5) / N
    # T_k(x_j) = T_k(-cos a) = (-1)^k cos(k a)
    C = np.cos(np.outer(k, ang)) * ((-1.0) ** k)[:, None]
    coef = 2.0 / N * (C @ values)
    coef[0] /= 2
    return coef


def resultant_degree_bound(n, m):
    """``2 (n - 1) (n - m)``: the exact resultant degree for ``-n < m < n``."""
    return 2 * (n - 1) * (n - m)
