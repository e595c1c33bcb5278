"""Fitting transmission data and ranking the competing explanations."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import scenario as sc
from ._lm import levenberg_marquardt
from .errors import DomainError, ValidationError
from .transmission import POWER_LAW_LENGTH, TransmissionCurve, TransmissionModel, survival_from_overlaps

EXPONENTIAL = "exponential"
INIT_THRESHOLD_FRACTION = 0.02
# A model with more free parameters must beat a simpler one at this F-test level.
TIE_SIGNIFICANCE = 0.01
# |h1| beyond this many data spans means the offset is not pinned down by the data.
H1_SPAN_LIMIT = 10.0


@dataclass
class FitResult:
    model: str
    params: dict[str, float]
    residual_ss: float
    n_points: int
    converged: bool
    iterations: int
    n_free: int
    message: str = ""

    @property
    def dof(self) -> int:
        return self.n_points - self.n_free

    @property
    def score(self) -> float:
        """Residual sum of squares per degree of freedom."""
        return self.residual_ss / self.dof if self.dof > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "params": {k: _json_float(v) for k, v in self.params.items()},
            "residual_ss": _json_float(self.residual_ss),
            "n_points": self.n_points,
            "n_free": self.n_free,
            "converged": self.converged,
            "iterations": self.iterations,
            "message": self.message,
        }


@dataclass
class ComparisonReport:
    fits: list[FitResult]
    best_model: str | None
    residual_ratios: dict[str, float] = field(default_factory=dict)

    def fit_for(self, model: str) -> FitResult:
        return next(f for f in self.fits if f.model == model)

    def to_dict(self) -> dict:
        return {
            "best_model": self.best_model,
            "residual_ratios": {k: _json_float(v) for k, v in self.residual_ratios.items()},
            "fits": [f.to_dict() for f in self.fits],
        }


def _json_float(v):
    v = float(v)
    return v if math.isfinite(v) else None


def _as_arrays(points, min_points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("points must be (x, N) pairs", fields=["points"])
    if len(arr) < min_points:
        raise ValidationError(f"need at least {min_points} points, got {len(arr)}", fields=["points"])
    if not np.all(np.isfinite(arr)):
        raise ValidationError("points must be finite", fields=["points"])
    return arr[:, 0].copy(), arr[:, 1].copy()


def fit_power_law(points, fix_exponent: float | None = None, fix_h1: float | None = None) -> FitResult:
    """Least-squares fit of N = a * max(0, (dh - h1) / 1 um)^p.

    Points at or below the current h1 carry zero derivative, so each
    Gauss-Newton step only sees the rising part of the curve; the final
    residual is always taken over every point.  ``fix_h1 = 0`` gives the
    pure power law.
    """
    dh, n = _as_arrays(points, 4)
    if np.any(np.diff(dh) <= 0):
        raise ValidationError("delta_h must be strictly increasing", fields=["points"])
    if np.all(n == 0):
        raise DomainError("all counts are zero; the power law is degenerate")
    x = dh / POWER_LAW_LENGTH
    span = x[-1] - x[0]

    if fix_h1 is not None:
        h1_0 = fix_h1 / POWER_LAW_LENGTH
    else:
        low = np.flatnonzero(n < INIT_THRESHOLD_FRACTION * n.max())
        h1_0 = x[low[-1]] if low.size and low[-1] < len(x) - 2 else 0.0
    p_0 = 1.5 if fix_exponent is None else fix_exponent
    f0 = np.maximum(0.0, x - h1_0) ** p_0
    a_0 = float(f0 @ n / (f0 @ f0))

    free = ["a_scale"] + (["h1"] if fix_h1 is None else []) + (["exponent"] if fix_exponent is None else [])

    def unpack(q):
        vals = dict(zip(free, q))
        return vals["a_scale"], vals.get("h1", h1_0), vals.get("exponent", p_0)

    def residuals(q):
        a, h1, p = unpack(q)
        if not 0 < p < 50:
            return np.full_like(n, np.inf)
        return a * np.maximum(0.0, x - h1) ** p - n

    def jacobian(q):
        a, h1, p = unpack(q)
        u = x - h1
        on = u > 0
        f = np.zeros_like(x)
        f[on] = u[on] ** p
        cols = {"a_scale": f}
        if "h1" in free:
            dh1 = np.zeros_like(x)
            dh1[on] = -a * p * u[on] ** (p - 1)
            cols["h1"] = dh1
        if "exponent" in free:
            dp = np.zeros_like(x)
            dp[on] = a * f[on] * np.log(u[on])
            cols["exponent"] = dp
        return np.column_stack([cols[k] for k in free])

    q0 = [a_0] + ([h1_0] if "h1" in free else []) + ([p_0] if "exponent" in free else [])
    res = levenberg_marquardt(residuals, jacobian, q0, max_iter=300)
    a, h1, p = unpack(res.params)
    converged, message = res.converged, res.message
    if fix_h1 is None and abs(h1 - x[0]) > H1_SPAN_LIMIT * max(span, 1.0):
        converged, message = False, "h1 unidentifiable: offset runs away from the data"
    if not all(math.isfinite(v) for v in (a, h1, p)):
        converged, message = False, "non-finite parameters"
    model = TransmissionModel.CLASSICAL_PURE if fix_h1 == 0 else TransmissionModel.CLASSICAL_TRANSLATED
    return FitResult(
        model=model.value,
        params={"a_scale": a, "h1_m": h1 * POWER_LAW_LENGTH, "exponent": p},
        residual_ss=res.residual_ss,
        n_points=len(n),
        converged=converged,
        iterations=res.iterations,
        n_free=len(free),
        message=message,
    )


def fit_exponential(points) -> FitResult:
    """(n0, k) for N = n0 exp(-k x) by linear regression of log N on x."""
    x, n = _as_arrays(points, 3)
    if np.any(n <= 0):
        raise DomainError("exponential fit needs N > 0 everywhere (log undefined)")
    y = np.log(n)
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0:
        raise ValidationError("x values must not all coincide", fields=["points"])
    slope = float(((x - xm) * (y - ym)).sum()) / sxx
    n0 = math.exp(ym - slope * xm)
    k = -slope
    resid = n0 * np.exp(-k * x) - n
    return FitResult(EXPONENTIAL, {"n0": n0, "k_per_m": k}, float(resid @ resid), len(n), True, 1, 2, "closed form")


def fit_quantum(points, cfg: sc.ScenarioConfig) -> FitResult:
    """Fit N = scale * sum_n w_n exp(-kappa L o_n(dh)) for (scale, kappa).

    Overlaps o_n do not depend on kappa and are computed once per slit
    width.  A log-spaced kappa scan with closed-form scale seeds the
    Levenberg-Marquardt refinement in (scale, log kappa).
    """
    dh, n = _as_arrays(points, 3)
    if np.any(dh <= 0):
        raise ValidationError("slit widths must be positive", fields=["points"])
    table = sc.overlap_table(cfg, dh)
    w = sc.beam_weights(cfg)
    table = table[:, : w.size]
    length = cfg.geometry.mirror_length

    def shape(logk):
        return survival_from_overlaps(table, w, length, math.exp(logk))

    def best_scale(f):
        ff = float(f @ f)
        return float(f @ n) / ff if ff > 0 else 0.0

    grid = math.log(cfg.kappa) + np.linspace(-8.0, 8.0, 65)
    scan = []
    for lk in grid:
        f = shape(lk)
        s = best_scale(f)
        scan.append((float(((s * f - n) ** 2).sum()), lk, s))
    _, lk0, s0 = min(scan)

    def residuals(q):
        return q[0] * shape(q[1]) - n

    def jacobian(q):
        kappa_l = math.exp(q[1]) * length
        e = np.exp(-kappa_l * table)
        f = e @ w
        dlogk = q[0] * ((e * (-kappa_l * table)) @ w)
        return np.column_stack([f, dlogk])

    res = levenberg_marquardt(residuals, jacobian, [s0, lk0])
    scale, logk = res.params
    return FitResult(
        model=cfg.transmission_model.value,
        params={"scale": float(scale), "kappa_per_m": math.exp(logk)},
        residual_ss=res.residual_ss,
        n_points=len(n),
        converged=res.converged and math.isfinite(scale) and math.isfinite(logk),
        iterations=res.iterations,
        n_free=2,
        message=res.message,
    )


@dataclass(frozen=True)
class Candidate:
    """One explanation to test; quantum models carry their scenario."""

    model: TransmissionModel
    scenario: sc.ScenarioConfig | None = None
    fix_exponent: float | None = None

    @classmethod
    def default(cls, model: TransmissionModel | str, base: sc.ScenarioConfig | None = None) -> Candidate:
        model = TransmissionModel(model)
        if not model.is_quantum:
            return cls(model)
        base = base or sc.ScenarioConfig()
        family = sc.ModelFamily.GRAVITY if model is TransmissionModel.QUANTUM_GRAVITY else sc.ModelFamily.BOX_ONLY
        cfg = base.with_(model_family=family, orientation=sc.Orientation.HORIZONTAL)
        return cls(model, scenario=cfg)


def fit_candidate(points, cand: Candidate) -> FitResult:
    if cand.model.is_quantum:
        return fit_quantum(points, cand.scenario or Candidate.default(cand.model).scenario)
    if cand.model is TransmissionModel.CLASSICAL_PURE:
        return fit_power_law(points, fix_exponent=cand.fix_exponent, fix_h1=0.0)
    return fit_power_law(points, fix_exponent=cand.fix_exponent)


def _significantly_worse(simple: FitResult, complex_: FitResult) -> bool:
    extra = complex_.n_free - simple.n_free
    if simple.residual_ss <= complex_.residual_ss:
        return False
    if complex_.residual_ss == 0:
        return True
    f_stat = ((simple.residual_ss - complex_.residual_ss) / extra) / complex_.score
    return f_stat > stats.f.ppf(1 - TIE_SIGNIFICANCE, extra, complex_.dof)


def _safe_fit(points, cand):
    try:
        return fit_candidate(points, cand)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return FitResult(cand.model.value, {}, math.inf, len(points), False, 0,
                         3 if cand.model is TransmissionModel.CLASSICAL_TRANSLATED else 2, str(exc))


def compare_models(points, candidates: Sequence[Candidate]) -> ComparisonReport:
    """Fit every candidate and rank by residual SS per degree of freedom.

    A candidate with fewer free parameters that is not worse than the
    leader at the F-test level ``TIE_SIGNIFICANCE`` counts as a tie and
    wins it.
    """
    _as_arrays(points, 6)
    if not candidates:
        raise ValidationError("no candidate models given", fields=["candidates"])
    fits = [_safe_fit(points, c) for c in candidates]
    fits.sort(key=lambda f: (f.model, f.n_free, f.score))
    ok = sorted((f for f in fits if f.converged and f.dof > 0), key=lambda f: (f.score, f.n_free, f.model))
    if not ok:
        return ComparisonReport(fits, None, {})
    best = ok[0]
    tied = [f for f in ok if f.n_free < best.n_free and not _significantly_worse(f, best)]
    if tied:
        best = min(tied, key=lambda f: (f.n_free, f.score, f.model))
    ratios = {}
    for f in fits:
        if best.score > 0:
            ratios[f.model] = f.score / best.score
        else:
            ratios[f.model] = 1.0 if f.score == 0 else math.inf
    return ComparisonReport(fits, best.model, ratios)


def synthesize_data(curve: TransmissionCurve, noise_sigma_rel: float, seed: int) -> list[tuple[float, float]]:
    """Multiplicative Gaussian noise N (1 + sigma eps), clamped at zero."""
    if not (math.isfinite(noise_sigma_rel) and noise_sigma_rel >= 0):
        raise DomainError("noise sigma must be non-negative")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(curve.n_count.size)
    noisy = np.maximum(0.0, curve.n_count * (1.0 + noise_sigma_rel * eps))
    return list(zip(curve.delta_h.tolist(), noisy.tolist()))
