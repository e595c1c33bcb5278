"""Small Levenberg-Marquardt driver for the model fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LMResult:
    params: np.ndarray
    residual_ss: float
    iterations: int
    converged: bool
    message: str


def levenberg_marquardt(residuals, jacobian, p0, max_iter=200, xtol=1e-13, ftol=1e-15, lam=1e-3):
    """Minimize ||residuals(p)||^2 by damped Gauss-Newton.

    ``jacobian(p)`` returns d residuals / d p.  Damping uses Marquardt's
    diagonal scaling.  Converges on a relative step below ``xtol`` or a
    relative decrease below ``ftol``.
    """
    p = np.asarray(p0, dtype=float).copy()
    r = residuals(p)
    ss = float(r @ r)
    for it in range(1, max_iter + 1):
        jac = jacobian(p)
        g = jac.T @ r
        a = jac.T @ jac
        diag = np.diag(a).copy()
        diag[diag <= 0] = 1e-12 * max(float(diag.max()), 1e-300)
        while True:
            try:
                step = np.linalg.solve(a + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            p_new = p + step
            r_new = residuals(p_new)
            ss_new = float(r_new @ r_new)
            if np.isfinite(ss_new) and ss_new <= ss:
                break
            lam *= 10
            if lam > 1e20:
                # no downhill step left at machine precision: a minimum
                return LMResult(p, ss, it, True, "no further decrease")
        small_step = np.all(np.abs(step) <= xtol * (np.abs(p) + xtol))
        small_gain = ss - ss_new <= ftol * ss
        p, r, ss = p_new, r_new, ss_new
        lam = max(lam / 10, 1e-12)
        if ss == 0.0 or small_step or small_gain:
            return LMResult(p, ss, it, True, "converged")
    return LMResult(p, ss, max_iter, False, "iteration cap reached")
