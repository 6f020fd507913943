"""Eigenvalues of symmetric tridiagonal matrices by Sturm-count bisection."""

from __future__ import annotations

import numba
import numpy as np

_EPS = np.finfo(float).eps


@numba.njit(cache=True, nogil=True)
def _count_below(d, e2, x, pivmin):
    # negatives among the LDL^T pivots of T - xI
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, d.size):
        q = (d[i] - x) - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _bisect_lowest(d, e, k, rtol):
    n = d.size
    e2 = e * e
    radius = np.zeros(n)
    for i in range(n - 1):
        r = abs(e[i])
        radius[i] += r
        radius[i + 1] += r
    lo0 = np.min(d - radius)
    hi0 = np.max(d + radius)
    norm = max(abs(lo0), abs(hi0), 1e-300)
    atol = 4.0 * 2.220446049250313e-16 * norm
    pivmin = 2.2250738585072014e-308 * max(1.0, np.max(e2) if n > 1 else 1.0)
    width = hi0 - lo0
    lo0 -= 2.0 * atol + 1e-3 * width
    hi0 += 2.0 * atol + 1e-3 * width
    out = np.empty(k)
    lo = lo0
    for j in range(k):
        a = lo
        b = hi0
        for _ in range(400):
            if b - a <= max(rtol * max(abs(a), abs(b)), atol):
                break
            mid = 0.5 * (a + b)
            if _count_below(d, e2, mid, pivmin) > j:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
        lo = a
    return out


def _check(diagonal, offdiagonal):
    d = np.ascontiguousarray(diagonal, dtype=float)
    e = np.ascontiguousarray(offdiagonal, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or d.size == 0:
        raise ValueError("diagonal and offdiagonal must be non-empty 1-D arrays")
    if e.size != d.size - 1:
        raise ValueError(f"offdiagonal length {e.size} must be len(diagonal) - 1 = {d.size - 1}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise ValueError("tridiagonal entries must be finite")
    return d, e


def sturm_count(diagonal, offdiagonal, x: float) -> int:
    """Number of eigenvalues strictly below ``x``."""
    d, e = _check(diagonal, offdiagonal)
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(e * e)) if e.size else 1.0)
    return int(_count_below(d, e * e, float(x), pivmin))


def tridiag_lowest_eigs(diagonal, offdiagonal, k: int, rtol: float = 1e-10) -> np.ndarray:
    """The ``k`` algebraically smallest eigenvalues, ascending.

    Accuracy is ``rtol`` relative, floored at a few ulps of the matrix norm
    (the Sturm count cannot resolve finer than that).
    """
    d, e = _check(diagonal, offdiagonal)
    if not 1 <= k <= d.size:
        raise ValueError(f"k must be between 1 and {d.size}, got {k}")
    return _bisect_lowest(d, e, int(k), float(rtol))
