"""Aberth-Ehrlich simultaneous root finding.

The iteration only needs the Newton correction ``f / f'`` at each estimate, so
the polynomial may be given implicitly.  Two front ends are provided: a
Chebyshev-T series, and a polynomial given as the determinant of a matrix
whose entries are polynomials (``f'/f = trace(M^{-1} M')``).
"""

import numpy as np
from numpy.polynomial import chebyshev as npcheb

#: rescale Clenshaw states when they exceed this magnitude
_BIG = 1e150


def _clenshaw_pair(c, dc, x):
    """Value and derivative with per-point rescaling; returns ``(f, df, log_scale)``."""
    n = c.size
    b1 = np.zeros(x.shape, dtype=complex)
    b2 = np.zeros_like(b1)
    d1 = np.zeros_like(b1)
    d2 = np.zeros_like(b1)
    scale = np.ones(x.shape)  # states are true states divided by scale
    two_x = 2 * x
    for k in range(n - 1, 0, -1):
        b1, b2 = two_x * b1 - b2 + c[k] / scale, b1
        d1, d2 = two_x * d1 - d2 + dc[k] / scale, d1
        big = np.maximum(np.maximum(np.abs(b1), np.abs(b2)), np.maximum(np.abs(d1), np.abs(d2)))
        over = big > _BIG
        if np.any(over):
            s = np.where(over, big, 1.0)
            b1, b2, d1, d2 = b1 / s, b2 / s, d1 / s, d2 / s
            scale = scale * s
    f = x * b1 - b2 + c[0] / scale
    df = x * d1 - d2 + dc[0] / scale
    return f, df, np.log(scale)


def initial_guesses(degree, rng, rho=1.3):
    """Points on a Joukowski ellipse around [-1, 1], randomly rotated and jittered."""
    phi = 2 * np.pi * (np.arange(degree) + rng.uniform(0.0, 1.0)) / degree
    w = rho * np.exp(1j * phi) * (1 + 0.05 * rng.uniform(-1, 1, degree))
    return 0.5 * (w + 1 / w)


def aberth(newton_ratio, degree, seed=0, max_sweeps=200, tol=1e-14, start=None):
    """Simultaneous Aberth-Ehrlich iteration.

    Parameters
    ----------
    newton_ratio : callable
        Maps an array of points to ``(f / f', settled)``; ``settled`` flags
        points whose residual is already at rounding level (or is None).
    degree : int
        Number of roots.
    seed : int
        Seeds the starting configuration when ``start`` is not given.
    max_sweeps : int
    tol : float
        A root is frozen once its correction is below ``tol * (1 + |x|)``.
    start : array_like, optional

    Returns
    -------
    roots : numpy.ndarray
    converged : bool
        False if some root was still moving after ``max_sweeps`` sweeps.
    """
    if degree < 1:
        return np.zeros(0, dtype=complex), True
    if start is None:
        x = initial_guesses(degree, np.random.default_rng(seed))
    else:
        x = np.array(start, dtype=complex)
    active = np.ones(degree, dtype=bool)
    for _ in range(max_sweeps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ratio, settled = newton_ratio(x[idx])
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            diff = x[idx, None] - x[None, :]
            diff[np.arange(idx.size), idx] = np.inf
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1 - ratio * repulsion)
        step[~np.isfinite(step)] = 0
        x[idx] -= step
        done = np.abs(step) <= tol * (1 + np.abs(x[idx]))
        if settled is not None:
            done |= settled
        active[idx[done]] = False
    return x, not np.any(active)


def _below_rounding(c, x, f, log_scale, factor=64):
    """True where ``|f(x)|`` is within a rounding-error bound of zero."""
    w = x + np.sqrt(x * x - 1 + 0j)
    rho = np.maximum(np.abs(w), 1 / np.maximum(np.abs(w), 1e-300))
    zero = np.zeros(c.size, dtype=complex)
    bound, _, bound_log = _clenshaw_pair(np.abs(c).astype(complex), zero, 0.5 * (rho + 1 / rho))
    with np.errstate(divide="ignore"):
        lhs = np.log(np.abs(f)) + log_scale
        rhs = np.log(factor * np.finfo(float).eps * np.abs(bound)) + bound_log
    return lhs <= rhs


def _chebyshev_ratio(coeffs):
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    c = c / np.max(np.abs(c))
    dc = npcheb.chebder(c)
    dc = np.concatenate([dc, np.zeros(c.size - dc.size, dtype=complex)])

    def newton_ratio(x):
        f, df, log_scale = _clenshaw_pair(c, dc, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = f / df
        return ratio, _below_rounding(c, x, f, log_scale)

    return newton_ratio, c.size - 1


def aberth_chebyshev(coeffs, seed=0, max_sweeps=200, tol=1e-14, start=None):
    """All roots of a Chebyshev-T series by Aberth-Ehrlich iteration.

    Returns ``(roots, converged)``; see :func:`aberth`.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    degree = c.size - 1
    if degree < 1:
        return np.zeros(0, dtype=complex), True
    if degree == 1:
        return np.array([-c[0] / c[1]]), True
    newton_ratio, _ = _chebyshev_ratio(c)
    x, converged = aberth(newton_ratio, degree, seed, max_sweeps, tol, start)
    # one Newton polish
    ratio, _ = newton_ratio(x)
    ok = np.isfinite(ratio) & (np.abs(ratio) < 1e-6 * (1 + np.abs(x)))
    x[ok] -= ratio[ok]
    return x, converged


def chebyshev_roots(coeffs, seed=0, max_sweeps=200):
    """Roots of a Chebyshev series.

    Aberth-Ehrlich from the default start; if it does not settle, it is
    restarted from the colleague-matrix eigenvalues.
    """
    x, converged = aberth_chebyshev(coeffs, seed=seed, max_sweeps=max_sweeps)
    if converged:
        return x
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    return aberth_chebyshev(c, max_sweeps=max_sweeps, start=npcheb.chebroots(c))[0]


def determinant_roots(matrix_and_derivative, degree, seed=0, max_sweeps=200, tol=1e-13):
    """Roots of ``t -> det M(t)`` for a polynomial matrix with known determinant degree.

    Parameters
    ----------
    matrix_and_derivative : callable
        Maps an array of t values to ``(M, dM/dt)``, each of shape ``t.shape + (k, k)``.
    degree : int
        Exact degree of ``det M``.

    Returns
    -------
    roots : numpy.ndarray
    converged : bool

    Notes
    -----
    The Newton correction is ``1 / trace(M^{-1} M')``, evaluated by an LU
    solve.  It stays accurate wherever M is well conditioned, which holds far
    more often than accuracy of the coefficients of ``det M``.
    """

    def newton_ratio(t):
        M, dM = matrix_and_derivative(t)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            try:
                tr = np.trace(np.linalg.solve(M, dM), axis1=-2, axis2=-1)
            except np.linalg.LinAlgError:
                tr = np.array([_trace_or_inf(m, d) for m, d in zip(M, dM)])
            ratio = 1.0 / tr
        return ratio, None

    return aberth(newton_ratio, degree, seed, max_sweeps, tol)


def _trace_or_inf(m, d):
    try:
        return np.trace(np.linalg.solve(m, d))
    except np.linalg.LinAlgError:
        return np.inf  # exactly singular: the point is a root
