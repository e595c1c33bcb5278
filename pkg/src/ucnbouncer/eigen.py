"""Bound states: analytic bouncer (Airy) and box solutions, and a
finite-difference solver for any sampled potential.

All three paths hand back :class:`EigenSolution` objects normalized by
the same trapezoid quadrature on their own grid, with psi made positive
on its first lobe.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import tridiag
from .airy import _ai_and_prime, airy_zero
from .errors import DomainError, ResolutionError
from .physconst import (
    Energy,
    PhysicalConstants,
    classical_height,
    gravity_energy_scale,
    gravity_length_scale,
)
from .potential import Grid, PotentialKind, PotentialSpec, sample

log = logging.getLogger(__name__)

MAX_ANALYTIC_AIRY_STATES = 50
MAX_ANALYTIC_BOX_STATES = 1000
DEFAULT_AIRY_POINTS = 8000
DEFAULT_BOX_POINTS = 4000


class Method(enum.Enum):
    ANALYTIC_AIRY = "AnalyticAiry"
    ANALYTIC_BOX = "AnalyticBox"
    NUMERIC_FD = "NumericFD"


class Boundary(enum.Enum):
    DIRICHLET_BOTH = "DirichletBoth"
    DIRICHLET_LEFT_DECAY_RIGHT = "DirichletLeftDecayRight"


@dataclass(frozen=True, eq=False)
class EigenSolution:
    n: int
    energy: Energy
    psi: np.ndarray
    grid: Grid
    method: Method

    @property
    def z(self) -> np.ndarray:
        return self.grid.z

    @property
    def psi_squared(self) -> np.ndarray:
        return self.psi**2

    def turning_point(self, c: PhysicalConstants) -> float:
        return classical_height(c, Energy(max(self.energy.value, 0.0)))

    def norm(self) -> float:
        return float(np.trapezoid(self.psi**2, dx=self.grid.spacing))

    def sign_changes(self, rel_floor: float = 1e-12) -> int:
        return count_sign_changes(self.psi, rel_floor)

    def to_csv(self) -> str:
        lines = ["z_m,psi,psi_squared"]
        for z, p in zip(self.z.tolist(), self.psi.tolist()):
            lines.append(f"{z!r},{p!r},{p * p!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AirySpectrumScale:
    epsilon0: Energy
    z0: float

    @classmethod
    def from_constants(cls, c: PhysicalConstants) -> AirySpectrumScale:
        return cls(gravity_energy_scale(c), gravity_length_scale(c))


def count_sign_changes(psi: np.ndarray, rel_floor: float = 1e-12) -> int:
    """Interior sign changes, ignoring samples below ``rel_floor * max|psi|``."""
    inner = psi[1:-1]
    keep = inner[np.abs(inner) > rel_floor * np.max(np.abs(psi))]
    return int(np.count_nonzero(np.signbit(keep[1:]) != np.signbit(keep[:-1])))


def _finish(psi: np.ndarray, dz: float) -> np.ndarray:
    psi = psi / math.sqrt(np.trapezoid(psi**2, dx=dz))
    big = np.flatnonzero(np.abs(psi) > 1e-3 * np.max(np.abs(psi)))
    if big.size and psi[big[0]] < 0:
        psi = -psi
    return psi


def gravity_mirror_spectrum(
    c: PhysicalConstants, n_states: int, n_points: int = DEFAULT_AIRY_POINTS, grid: Grid | None = None
) -> list[EigenSolution]:
    """Quantum bouncer states E_n = eps0 alpha_n, psi_n ~ Ai(z/z0 - alpha_n)."""
    if not 1 <= n_states <= MAX_ANALYTIC_AIRY_STATES:
        raise DomainError(f"n_states must be in [1, {MAX_ANALYTIC_AIRY_STATES}], got {n_states}")
    if grid is None:
        grid = sample(PotentialSpec(PotentialKind.GRAVITY_MIRROR), c, n_points, n_states_hint=n_states)
    scale = AirySpectrumScale.from_constants(c)
    z = grid.z
    out = []
    for n in range(1, n_states + 1):
        alpha = airy_zero(n)
        ai = _ai_and_prime(z / scale.z0 - alpha)[0]
        ai[0] = 0.0
        psi = _finish(ai, grid.spacing)
        out.append(EigenSolution(n, Energy(scale.epsilon0.value * alpha), psi, grid, Method.ANALYTIC_AIRY))
    return out


def box_energy(c: PhysicalConstants, a: float, n: int) -> Energy:
    return Energy(c.hbar**2 * math.pi**2 * n**2 / (2 * c.neutron_mass * a**2))


def box_spectrum(
    c: PhysicalConstants, a: float, n_states: int, n_points: int = DEFAULT_BOX_POINTS, grid: Grid | None = None
) -> list[EigenSolution]:
    """Infinite-box states E_n = hbar^2 pi^2 n^2 / (2 m a^2)."""
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f"box width must be positive, got {a!r}")
    if not 1 <= n_states <= MAX_ANALYTIC_BOX_STATES:
        raise DomainError(f"n_states must be in [1, {MAX_ANALYTIC_BOX_STATES}], got {n_states}")
    if grid is None:
        grid = sample(PotentialSpec(PotentialKind.INFINITE_BOX, slit_width=a), c, n_points)
    z = grid.z
    out = []
    for n in range(1, n_states + 1):
        psi = math.sqrt(2 / a) * np.sin(n * math.pi * z / a)
        psi[0] = psi[-1] = 0.0
        out.append(EigenSolution(n, box_energy(c, a, n), _finish(psi, grid.spacing), grid, Method.ANALYTIC_BOX))
    return out


def solve_numeric(
    grid: Grid, c: PhysicalConstants, n_states: int, boundary: Boundary = Boundary.DIRICHLET_BOTH
) -> list[EigenSolution]:
    """Lowest eigenpairs of the 3-point finite-difference Hamiltonian on ``grid``.

    psi vanishes at both end nodes.  Under ``DIRICHLET_LEFT_DECAY_RIGHT``
    the right end is a truncation inside a classically forbidden region,
    and only states below ``grid.bound_energy`` are returned; a shorter
    list than requested is the shortfall signal.
    """
    if n_states < 1:
        raise DomainError("n_states must be >= 1")
    if n_states >= grid.n_points / 8:
        raise ResolutionError(
            "grid too coarse for requested states", n_points=grid.n_points, n_states=n_states
        )
    dz = grid.spacing
    unit = c.hbar**2 / (2 * c.neutron_mass * dz**2)
    d = 2.0 + grid.values[1:-1] / unit
    e = -np.ones(grid.n_points - 3)
    n_keep = n_states
    if boundary is Boundary.DIRICHLET_LEFT_DECAY_RIGHT and grid.bound_energy is not None:
        n_bound = tridiag.count_below(d, e, grid.bound_energy / unit)
        if n_bound < n_states:
            log.debug("only %d of %d requested states are bound", n_bound, n_states)
            n_keep = n_bound
    if n_keep == 0:
        return []
    vals, vecs = tridiag.lowest_eigenpairs(d, e, n_keep)
    out = []
    for k in range(n_keep):
        psi = np.zeros(grid.n_points)
        psi[1:-1] = vecs[:, k]
        out.append(EigenSolution(k + 1, Energy(vals[k] * unit), _finish(psi, dz), grid, Method.NUMERIC_FD))
    return out
