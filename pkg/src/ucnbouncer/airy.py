"""Airy function Ai, its derivative, and the zeros of Ai.

Near the origin the Maclaurin two-series form is summed directly; outside
the asymptotic expansions take over.  The negative-side switch sits at
x = -7 rather than -6: at -6 the oscillatory expansion is only good to
~7e-11, at -7 both branches agree to ~1e-13.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

# Ai(0) = 1 / (3^(2/3) Gamma(2/3)),  -Ai'(0) = 1 / (3^(1/3) Gamma(1/3))
_C1 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
_C2 = 1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))

POS_SWITCH = 6.0
NEG_SWITCH = -7.0
MAX_ABS_X = 50.0

_N_SERIES = 80
_N_ASYM = 20


def _asymptotic_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return np.array(u), np.array(v)


_U, _V = _asymptotic_coefficients(_N_ASYM)


def _series(x):
    """Return (Ai, Ai') from the Maclaurin series; x is a 1-D array."""
    x3 = x**3
    f = np.ones_like(x)
    g = x.copy()
    fp = np.zeros_like(x)
    gp = x.copy()
    tf = np.ones_like(x)  # x^(3k) / prod
    tg = x.copy()  # x^(3k+1) / prod
    for k in range(1, _N_SERIES):
        tf = tf * x3 / ((3 * k - 1) * (3 * k))
        tg = tg * x3 / ((3 * k) * (3 * k + 1))
        f += tf
        g += tg
        fp += 3 * k * tf
        gp += (3 * k + 1) * tg
        if np.all(np.abs(tf) <= 1e-17 * np.abs(f)) and np.all(np.abs(tg) <= 1e-17 * np.abs(g) + 1e-300):
            break
    with np.errstate(divide="ignore", invalid="ignore"):
        fp = np.where(x != 0, fp / x, 0.0)
        gp = np.where(x != 0, gp / x, 1.0)
    return _C1 * f - _C2 * g, _C1 * fp - _C2 * gp


def _alternating_sums(coef, zeta):
    """Even/odd alternating sums  sum (-1)^k c_{2k} zeta^-2k  and  sum (-1)^k c_{2k+1} zeta^-(2k+1)."""
    inv = 1.0 / zeta
    even = np.zeros_like(zeta)
    odd = np.zeros_like(zeta)
    power = np.ones_like(zeta)
    for k in range(len(coef)):
        term = coef[k] * power
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            even += sign * term
        else:
            odd += sign * term
        power = power * inv
    return even, odd


def _asym_negative(x):
    t = -x
    zeta = (2.0 / 3.0) * t**1.5
    p, q = _alternating_sums(_U, zeta)
    r, s = _alternating_sums(_V, zeta)
    sp, cp = np.sin(zeta + math.pi / 4), np.cos(zeta + math.pi / 4)
    ai = (sp * p - cp * q) / (math.sqrt(math.pi) * t**0.25)
    aip = -(t**0.25) * (cp * r + sp * s) / math.sqrt(math.pi)
    return ai, aip


def _asym_positive(x):
    zeta = (2.0 / 3.0) * x**1.5
    signs = (-1.0) ** np.arange(_N_ASYM)
    inv = 1.0 / zeta
    su = np.zeros_like(x)
    sv = np.zeros_like(x)
    power = np.ones_like(x)
    for k in range(_N_ASYM):
        su += signs[k] * _U[k] * power
        sv += signs[k] * _V[k] * power
        power = power * inv
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * su / x**0.25, -pref * sv * x**0.25


def _ai_and_prime(x):
    """Ai and Ai' with no range check; x is array-like."""
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    mid = (flat >= NEG_SWITCH) & (flat <= POS_SWITCH)
    neg = flat < NEG_SWITCH
    pos = flat > POS_SWITCH
    if mid.any():
        ai[mid], aip[mid] = _series(flat[mid])
    if neg.any():
        ai[neg], aip[neg] = _asym_negative(flat[neg])
    if pos.any():
        with np.errstate(under="ignore"):
            ai[pos], aip[pos] = _asym_positive(flat[pos])
    return ai.reshape(x.shape), aip.reshape(x.shape)


def _check_range(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Airy argument must be finite")
    if np.any(np.abs(arr) > MAX_ABS_X):
        raise DomainError(f"Airy argument outside validated range |x| <= {MAX_ABS_X:g}")
    return arr


def _unwrap(values, template):
    return float(values) if np.ndim(template) == 0 else values


def airy_ai(x):
    """Ai(x) for scalar or array ``x`` with |x| <= 50."""
    arr = _check_range(x)
    return _unwrap(_ai_and_prime(arr)[0], x)


def airy_ai_prime(x):
    """Ai'(x) for scalar or array ``x`` with |x| <= 50."""
    arr = _check_range(x)
    return _unwrap(_ai_and_prime(arr)[1], x)


def _zero_guess(n):
    t = 3.0 * math.pi / 8.0 * (4 * n - 1)
    return t ** (2.0 / 3.0) * (1 + 5 / 48 * t**-2 - 5 / 36 * t**-4 + 77125 / 82944 * t**-6)


MAX_ZERO_INDEX = 100


def airy_zero(n: int) -> float:
    """n-th zero alpha_n > 0 of Ai(-x), 1 <= n <= 100.

    Newton on x -> Ai(-x) started from the asymptotic zero formula and
    kept inside the bracket between neighbouring asymptotic estimates.
    The largest zeros sit beyond |x| = 50, where the oscillatory
    expansion is at its most accurate, so no range check applies here.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_ZERO_INDEX:
        raise DomainError(f"Airy zero index must be an integer in [1, {MAX_ZERO_INDEX}], got {n!r}")
    guess = _zero_guess(n)
    lo = 0.5 * (_zero_guess(n - 1) + guess) if n > 1 else 1.5
    hi = 0.5 * (guess + _zero_guess(n + 1))
    a = guess
    for _ in range(50):
        ai, aip = _ai_and_prime(-a)
        # d/da Ai(-a) = -Ai'(-a)
        step = ai / aip
        a_new = a + step
        if not lo < a_new < hi:
            a_new = 0.5 * (lo + hi)
        if abs(a_new - a) <= 4e-16 * a_new:
            return float(a_new)
        a = a_new
    return float(a)


def airy_zeros(n_states: int) -> np.ndarray:
    return np.array([airy_zero(k) for k in range(1, n_states + 1)])
