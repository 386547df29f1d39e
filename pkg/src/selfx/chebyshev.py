"""Chebyshev polynomials of the second kind for every integer index.

``U_k(cos x) = sin((k+1) x) / sin x`` for ``k >= 0``.  Negative indices follow
the conventions ``U_{-1} = 0`` and ``U_{-k-1} = -U_{k-1}``, which agree with the
sine-ratio formula.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class ChebyshevU:
    """U_index in the monomial basis.

    Parameters
    ----------
    index : int
        Any integer.
    coeffs : numpy.ndarray
        Real coefficients in ascending powers of t.  The zero polynomial
        (index -1) is stored as ``[0.0]``.
    """

    index: int
    coeffs: np.ndarray

    @property
    def degree(self):
        if self.index == -1:
            return -1
        return abs(self.index + 1) - 1

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)


def _reflect(index):
    """Return (sign, k) with U_index = sign * U_k and k >= -1."""
    if index >= -1:
        return 1, index
    return -1, -index - 2


@lru_cache(maxsize=256)
def _positive_coeffs(k):
    # U_0 = 1, U_1 = 2t, U_{j+1} = 2t U_j - U_{j-1}
    prev = np.zeros(k + 1)
    cur = np.zeros(k + 1)
    prev[0] = 1.0
    if k == 0:
        return prev
    cur[1] = 2.0
    for _ in range(1, k):
        nxt = np.empty(k + 1)
        nxt[0] = 0.0
        nxt[1:] = 2.0 * cur[:-1]
        nxt -= prev
        prev, cur = cur, nxt
    cur.setflags(write=False)
    return cur


def u_coeffs(index):
    """Monomial coefficients of U_index.

    Examples
    --------
    >>> u_coeffs(2).coeffs
    array([-1.,  0.,  4.])
    """
    sign, k = _reflect(int(index))
    if k == -1:
        return ChebyshevU(int(index), np.zeros(1))
    return ChebyshevU(int(index), sign * np.array(_positive_coeffs(k)))


def u_eval(index, t):
    """Evaluate U_index at t (real or complex, scalar or array).

    Uses the three-term recurrence, so it stays valid off [-1, 1] and at
    t = +-1 where the sine ratio is 0/0.
    """
    sign, k = _reflect(int(index))
    t = np.asarray(t)
    dtype = np.result_type(t, float)
    if k == -1:
        out = np.zeros(t.shape, dtype=dtype)
        return out[()] if out.ndim == 0 else out
    prev = np.ones(t.shape, dtype=dtype)
    if k == 0:
        out = sign * prev
        return out[()] if out.ndim == 0 else out
    cur = 2 * t.astype(dtype)
    for _ in range(1, k):
        prev, cur = cur, 2 * t * cur - prev
    out = sign * cur
    return out[()] if out.ndim == 0 else out


def u_table(kmax, t):
    """Values U_{-1}, U_0, ..., U_kmax at t, shape ``(kmax + 2,) + t.shape``.

    Row ``j`` holds U_{j-1}; negative indices are read off with
    :func:`_reflect`.
    """
    t = np.asarray(t)
    dtype = np.result_type(t, float)
    out = np.zeros((kmax + 2,) + t.shape, dtype=dtype)
    if kmax >= 0:
        out[1] = 1.0
    if kmax >= 1:
        out[2] = 2 * t
    for j in range(3, kmax + 2):
        out[j] = 2 * t * out[j - 1] - out[j - 2]
    return out
