"""From bound states to detector counts.

A state that overlaps the absorber is lost at a constant rate per unit
cavity length, so its survival over the cavity is exp(-kappa * overlap *
length).  The count at slit width dh is the weighted sum of survivals.
The classical alternative is the translated power law.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .eigen import EigenSolution
from .errors import DomainError, NumericError, ValidationError
from .physconst import Energy, PhysicalConstants, thermal_energy

DEFAULT_CAVITY_LENGTH = 0.10  # mirror length [m]
# Ground-state survival halves over the cavity when 1e-4 of |psi|^2 sits in the absorber.
HALF_SURVIVAL_OVERLAP = 1e-4
DEFAULT_KAPPA = math.log(2) / (HALF_SURVIVAL_OVERLAP * DEFAULT_CAVITY_LENGTH)
DEFAULT_MAX_STATES = 20
DEFAULT_CUTOFF_FACTOR = 10.0
# 1 um: the power law reads N = a * ((dh - h1) / 1 um)^p so a is dimensionless.
POWER_LAW_LENGTH = 1e-6


class TransmissionModel(enum.Enum):
    QUANTUM_GRAVITY = "quantum-gravity"
    QUANTUM_BOX = "quantum-box"
    CLASSICAL_TRANSLATED = "classical-translated"
    CLASSICAL_PURE = "classical-pure"

    @property
    def is_quantum(self) -> bool:
        return self in (TransmissionModel.QUANTUM_GRAVITY, TransmissionModel.QUANTUM_BOX)


@dataclass(frozen=True, eq=False)
class TransmissionCurve:
    model: TransmissionModel
    delta_h: np.ndarray
    n_count: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        dh = np.asarray(self.delta_h, dtype=float)
        n = np.asarray(self.n_count, dtype=float)
        object.__setattr__(self, "delta_h", dh)
        object.__setattr__(self, "n_count", n)
        if dh.shape != n.shape or dh.ndim != 1:
            raise ValidationError("delta_h and n_count must be 1-D of equal length", fields=["points"])
        if np.any(np.diff(dh) <= 0):
            raise ValidationError("delta_h must be strictly increasing", fields=["delta_h"])
        if not np.all(np.isfinite(n)) or np.any(n < 0):
            raise ValidationError("n_count must be finite and non-negative", fields=["n_count"])

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.delta_h.tolist(), self.n_count.tolist()))

    def to_csv(self) -> str:
        lines = ["delta_h_um,n_count"]
        lines += [f"{to_micrometres(dh)!r},{n!r}" for dh, n in self.points]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LeakageModel:
    n0: float
    k: float
    delta_h: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.n0) and self.n0 > 0):
            raise ValidationError("n0 must be positive", fields=["n0"])
        if not (math.isfinite(self.k) and self.k >= 0):
            raise ValidationError("k must be non-negative", fields=["k"])


def absorber_overlap(sol: EigenSolution, delta_h: float) -> float:
    """Fraction of |psi|^2 at z >= delta_h (trapezoid on the state's grid)."""
    grid = sol.grid
    if not grid.z_min <= delta_h <= grid.z_max:
        raise DomainError(f"delta_h={delta_h!r} m outside grid [{grid.z_min!r}, {grid.z_max!r}]")
    dz = grid.spacing
    p2 = sol.psi**2
    s = (delta_h - grid.z_min) / dz
    i = int(math.floor(s + 1e-9))
    frac = s - i
    if abs(frac) < 1e-9 or i >= grid.n_points - 1:
        i = min(round(s), grid.n_points - 1)
        tail = np.trapezoid(p2[i:], dx=dz) if i < grid.n_points - 1 else 0.0
    else:
        # partial first cell: linear interpolation of psi^2 at delta_h
        edge = p2[i] + frac * (p2[i + 1] - p2[i])
        tail = 0.5 * (edge + p2[i + 1]) * (1 - frac) * dz + np.trapezoid(p2[i + 1 :], dx=dz)
    return float(min(max(tail, 0.0), 1.0))


def leakage_rate(sol: EigenSolution, delta_h: float, kappa: float) -> float:
    """Loss rate per unit length k = kappa * overlap [1/m]."""
    if not (math.isfinite(kappa) and kappa > 0):
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    return kappa * absorber_overlap(sol, delta_h)


def leakage_curve(model: LeakageModel, x_values: Sequence[float]) -> list[tuple[float, float]]:
    """N(x) = n0 exp(-k x) over cavity lengths ``x_values`` [m]."""
    xs = np.asarray(x_values, dtype=float)
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise DomainError("cavity lengths must be finite and non-negative")
    ns = model.n0 * np.exp(-model.k * xs)
    return list(zip(xs.tolist(), ns.tolist()))


def boltzmann_weights(
    energies: Sequence[Energy],
    c: PhysicalConstants,
    temperature: float,
    cutoff_factor: float = DEFAULT_CUTOFF_FACTOR,
    max_states: int = DEFAULT_MAX_STATES,
) -> np.ndarray:
    """exp(-E_n / kT) over states with E_n <= cutoff_factor * kT, renormalized."""
    kt = thermal_energy(c, temperature).value
    if kt <= 0:
        raise DomainError("temperature must be positive for Boltzmann weights")
    e = np.array([en.value for en in energies[:max_states]])
    e = e[e <= cutoff_factor * kt]
    if e.size == 0:
        raise DomainError("no state lies below the Boltzmann cutoff")
    w = np.exp(-(e - e[0]) / kt)
    return w / w.sum()


def overlap_table(
    spectrum_for: Callable[[float], list[EigenSolution]], delta_h_values: Sequence[float], n_states: int
) -> np.ndarray:
    """Absorber overlaps, shape (len(delta_h), n_states).

    States missing from the spectrum at some dh (not bound by the slit)
    get overlap 1: nothing keeps them out of the absorber.
    """
    table = np.ones((len(delta_h_values), n_states))
    for i, dh in enumerate(delta_h_values):
        try:
            states = spectrum_for(dh)
        except NumericError as exc:
            raise NumericError(f"spectrum failed at delta_h={float(dh)!r} m: {exc}") from exc
        for j, sol in enumerate(states[:n_states]):
            table[i, j] = absorber_overlap(sol, dh)
    return table


def survival_from_overlaps(overlaps: np.ndarray, weights: np.ndarray, cavity_length: float, kappa: float):
    """Weighted survival sum for a precomputed overlap table."""
    return np.exp(-(kappa * cavity_length) * overlaps) @ weights


def quantum_transmission(
    spectrum_for: Callable[[float], list[EigenSolution]],
    weights: Sequence[float],
    cavity_length: float,
    kappa: float,
    delta_h_values: Sequence[float],
    model: TransmissionModel = TransmissionModel.QUANTUM_GRAVITY,
) -> TransmissionCurve:
    """N(dh) = sum_n w_n exp(-kappa * overlap_n(dh) * cavity_length)."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise ValidationError("weights must be non-negative and sum to 1", fields=["weights"])
    if not (math.isfinite(cavity_length) and cavity_length > 0):
        raise ValidationError("cavity_length must be positive", fields=["cavity_length"])
    if not (math.isfinite(kappa) and kappa >= 0):
        raise ValidationError("kappa must be non-negative", fields=["kappa"])
    dh = np.asarray(delta_h_values, dtype=float)
    table = overlap_table(spectrum_for, dh, w.size)
    n = survival_from_overlaps(table, w, cavity_length, kappa)
    check_nondecreasing(dh, n)
    params = {"cavity_length_m": cavity_length, "kappa_per_m": kappa, "weights": w.tolist()}
    return TransmissionCurve(model, dh, n, params)


# Wiggles below this are discretization noise of ~1e-13 in the overlaps.
MONOTONE_SLACK = 1e-10


def check_nondecreasing(delta_h: np.ndarray, n: np.ndarray) -> None:
    drops = np.flatnonzero(np.diff(n) < -MONOTONE_SLACK)
    if drops.size:
        i = int(drops[0])
        raise NumericError(
            "transmission decreases with slit width",
            delta_h_m=float(delta_h[i + 1]), drop=float(n[i] - n[i + 1]),
        )


def classical_curve(
    a_scale: float, h1: float, exponent: float, delta_h_values: Sequence[float]
) -> TransmissionCurve:
    """N = a * max(0, (dh - h1) / 1 um)^exponent; h1 = 0 is the pure curve."""
    if not (math.isfinite(exponent) and exponent > 0):
        raise DomainError(f"exponent must be positive, got {exponent!r}")
    if not (math.isfinite(h1) and h1 >= 0):
        raise DomainError(f"h1 must be non-negative, got {h1!r}")
    dh = np.asarray(delta_h_values, dtype=float)
    n = a_scale * power_law(dh, h1, exponent)
    model = TransmissionModel.CLASSICAL_PURE if h1 == 0 else TransmissionModel.CLASSICAL_TRANSLATED
    params = {"a_scale": a_scale, "h1_m": h1, "exponent": exponent}
    return TransmissionCurve(model, dh, n, params)


def to_micrometres(length: float) -> float:
    """Metres to micrometres at 12 significant digits, so 2.5e-6 prints as 2.5."""
    return float(f"{length * 1e6:.12g}")


def power_law(delta_h, h1, exponent):
    u = np.maximum(0.0, (np.asarray(delta_h, dtype=float) - h1) / POWER_LAW_LENGTH)
    return u**exponent
