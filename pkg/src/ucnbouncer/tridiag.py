"""Symmetric tridiagonal eigenpairs by Sturm-count bisection.

The matrix is given by its diagonal ``d`` and off-diagonal ``e``.
Eigenvalues are located one by one by bisection on the Sturm count
(number of negative pivots of T - x I); eigenvectors follow from a few
steps of inverse iteration.  Cost is O(n) per count, so only the lowest
handful of states is cheap, which is all the solvers need.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import ConvergenceError

_EPS = np.finfo(float).eps
_MAX_BISECT = 400


@numba.njit(cache=True)
def _count_below(d, e2, x, pivmin):
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@numba.njit(cache=True)
def _bisect(d, e2, n_want, lo0, hi0, pivmin, abstol):
    out = np.empty(n_want)
    iters = np.zeros(n_want, dtype=np.int64)
    lo_k = lo0
    for k in range(n_want):
        lo = lo_k
        hi = hi0
        it = 0
        while it < 400:
            tol = abstol + 2.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi))
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if _count_below(d, e2, mid, pivmin) > k:
                hi = mid
            else:
                lo = mid
            it += 1
        out[k] = 0.5 * (lo + hi)
        iters[k] = it
        lo_k = lo
    return out, iters


@numba.njit(cache=True)
def _solve_shifted(d, e, lam, b, pivmin):
    # Gaussian elimination without pivoting on (T - lam I) x = b.
    n = d.shape[0]
    c = np.empty(n)
    y = np.empty(n)
    piv = d[0] - lam
    if abs(piv) < pivmin:
        piv = pivmin
    c[0] = e[0] / piv if n > 1 else 0.0
    y[0] = b[0] / piv
    for i in range(1, n):
        piv = d[i] - lam - e[i - 1] * c[i - 1]
        if abs(piv) < pivmin:
            piv = pivmin
        if i < n - 1:
            c[i] = e[i] / piv
        y[i] = (b[i] - e[i - 1] * y[i - 1]) / piv
    x = np.empty(n)
    x[n - 1] = y[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = y[i] - c[i] * x[i + 1]
    return x


def gershgorin_bounds(d, e):
    pad = np.zeros(len(d))
    pad[:-1] += np.abs(e)
    pad[1:] += np.abs(e)
    return float(np.min(d - pad)), float(np.max(d + pad))


def count_below(d, e, x: float) -> int:
    """Number of eigenvalues of the tridiagonal matrix strictly below ``x``."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    lo, hi = gershgorin_bounds(d, e)
    pivmin = _pivmin(e)
    return int(_count_below(d, e * e, float(x), pivmin))


def _pivmin(e):
    emax = float(np.max(e * e)) if len(e) else 0.0
    return float(np.finfo(float).tiny) * max(1.0, emax)


def lowest_eigenvalues(d, e, n: int) -> np.ndarray:
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    lo, hi = gershgorin_bounds(d, e)
    pivmin = _pivmin(e)
    abstol = 2.0 * _EPS * max(abs(lo), abs(hi)) * 1e-3
    vals, iters = _bisect(d, e * e, n, lo, hi, pivmin, abstol)
    if np.any(iters >= _MAX_BISECT):
        raise ConvergenceError("Sturm bisection hit the iteration cap",
                               worst_state=int(np.argmax(iters)) + 1, cap=_MAX_BISECT)
    return vals


def eigenvector(d, e, lam: float, n_iter: int = 3, seed: int = 20030102) -> np.ndarray:
    """Unit eigenvector for an (accurate) eigenvalue ``lam`` by inverse iteration."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    lo, hi = gershgorin_bounds(d, e)
    pivmin = _EPS * max(abs(lo), abs(hi))
    x = np.random.default_rng(seed).uniform(0.5, 1.5, len(d))
    for _ in range(n_iter):
        x = _solve_shifted(d, e, float(lam), x, pivmin)
        x /= np.linalg.norm(x)
    return x


def lowest_eigenpairs(d, e, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowest ``n`` eigenvalues and orthonormal eigenvectors (as columns)."""
    vals = lowest_eigenvalues(d, e, n)
    vecs = np.empty((len(d), n))
    for k, lam in enumerate(vals):
        v = eigenvector(d, e, lam)
        for j in range(k):
            v -= (vecs[:, j] @ v) * vecs[:, j]
        vecs[:, k] = v / np.linalg.norm(v)
    return vals, vecs
