"""Confining potentials along the vertical coordinate and their sampling.

Four shapes are supported: a mirror in gravity (semi-infinite), the flat
infinite box, a box with gravity inside, and gravity with a finite step
barrier standing in for the absorber.  Hard walls are never represented
by large numbers; they are Dirichlet boundaries of the sampled domain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .airy import airy_zero
from .errors import ValidationError
from .physconst import REFERENCE, PhysicalConstants, gravity_energy_scale, gravity_length_scale

MIN_POINTS = 16
TRUNCATION_FACTOR = 4.0
# Tail length past the absorber edge, in decay lengths of the weakest-bound state kept.
ABSORBER_DECAY_LENGTHS = 25.0
# Bound states must sit at least absorber_height / BOUND_MARGIN_DIVISOR below the barrier top.
BOUND_MARGIN_DIVISOR = 5.0


class PotentialKind(enum.Enum):
    GRAVITY_MIRROR = "gravity-mirror"
    INFINITE_BOX = "box"
    GRAVITY_BOX = "gravity-box"
    GRAVITY_ABSORBER = "gravity-absorber"


def default_absorber_height() -> float:
    """100 x the gravity ground state for reference constants [J].

    A fixed number on purpose: the absorber does not get stronger when g
    changes, so runs with modified gravity stay comparable.
    """
    return 100.0 * gravity_energy_scale(REFERENCE).value * airy_zero(1)


@dataclass(frozen=True)
class PotentialSpec:
    kind: PotentialKind
    slit_width: float | None = None
    absorber_height: float | None = None
    gravity_on: bool = True

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", PotentialKind(self.kind))
        if self.kind is PotentialKind.GRAVITY_ABSORBER and self.absorber_height is None:
            object.__setattr__(self, "absorber_height", default_absorber_height())
        bad = self.problems()
        if bad:
            raise ValidationError(f"invalid {self.kind.value} potential", fields=bad)

    def problems(self) -> list[str]:
        bad = []
        if self.kind is not PotentialKind.GRAVITY_MIRROR:
            w = self.slit_width
            if w is None or not math.isfinite(w) or w <= 0:
                bad.append("slit_width")
        if self.kind is PotentialKind.GRAVITY_ABSORBER:
            u = self.absorber_height
            if u is None or not math.isfinite(u) or u <= 0:
                bad.append("absorber_height")
        if self.kind is PotentialKind.GRAVITY_MIRROR and not self.gravity_on:
            bad.append("gravity_on")
        return bad

    def has_gravity(self) -> bool:
        return self.kind is not PotentialKind.INFINITE_BOX and self.gravity_on

    def barrier_top(self, c: PhysicalConstants) -> float:
        """Potential just inside the absorber, V(slit_width+) [J]."""
        g = c.g_accel if self.has_gravity() else 0.0
        return self.absorber_height + c.neutron_mass * g * self.slit_width

    def bound_energy(self, c: PhysicalConstants) -> float | None:
        """Energy ceiling for states counted as bound by the slit."""
        if self.kind is not PotentialKind.GRAVITY_ABSORBER:
            return None
        return self.barrier_top(c) - self.absorber_height / BOUND_MARGIN_DIVISOR

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "gravity_on": self.gravity_on}
        if self.slit_width is not None:
            out["slit_width_m"] = self.slit_width
        if self.absorber_height is not None:
            out["absorber_height_J"] = self.absorber_height
        return out

    @classmethod
    def from_dict(cls, data: dict) -> PotentialSpec:
        known = {"kind", "gravity_on", "slit_width_m", "absorber_height_J"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError("unknown potential keys", fields=unknown)
        try:
            kind = PotentialKind(data["kind"])
        except (KeyError, ValueError):
            raise ValidationError("potential kind missing or unknown", fields=["kind"]) from None
        return cls(
            kind=kind,
            slit_width=data.get("slit_width_m"),
            absorber_height=data.get("absorber_height_J"),
            gravity_on=bool(data.get("gravity_on", True)),
        )


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform sampling of V(z); psi is pinned to zero at both end nodes."""

    z_min: float
    z_max: float
    n_points: int
    values: np.ndarray
    spec: PotentialSpec | None = None
    bound_energy: float | None = None

    def __post_init__(self):
        if self.n_points < MIN_POINTS:
            raise ValidationError(f"grid needs at least {MIN_POINTS} points", fields=["n_points"])
        if not self.z_max > self.z_min:
            raise ValidationError("grid must have z_max > z_min", fields=["z_min", "z_max"])
        if self.values.shape != (self.n_points,):
            raise ValidationError("values length must equal n_points", fields=["values"])

    @property
    def spacing(self) -> float:
        return (self.z_max - self.z_min) / (self.n_points - 1)

    @property
    def z(self) -> np.ndarray:
        return self.z_min + self.spacing * np.arange(self.n_points)

    def to_csv(self) -> str:
        lines = ["z_meters,V_joules"]
        lines += [f"{z!r},{v!r}" for z, v in zip(self.z.tolist(), self.values.tolist())]
        return "\n".join(lines) + "\n"


def mirror_cutoff(c: PhysicalConstants, n_states: int) -> float:
    """Truncation height for the open mirror: 4 x the top turning point [m]."""
    return TRUNCATION_FACTOR * gravity_length_scale(c) * airy_zero(n_states)


def absorber_tail(spec: PotentialSpec, c: PhysicalConstants) -> float:
    """Length of absorber region kept past the slit edge [m]."""
    margin = spec.absorber_height / BOUND_MARGIN_DIVISOR
    decay = math.sqrt(2 * c.neutron_mass * margin) / c.hbar
    return ABSORBER_DECAY_LENGTHS / decay


def sample(spec: PotentialSpec, c: PhysicalConstants, n_points: int, n_states_hint: int = 1) -> Grid:
    """Sample ``spec`` on a uniform grid of ``n_points`` nodes (end nodes included)."""
    if n_points < MIN_POINTS:
        raise ValidationError(f"need at least {MIN_POINTS} grid points", fields=["n_points"])
    if n_states_hint < 1:
        raise ValidationError("n_states_hint must be >= 1", fields=["n_states_hint"])
    mg = c.neutron_mass * c.g_accel if spec.has_gravity() else 0.0
    kind = spec.kind
    if kind is PotentialKind.INFINITE_BOX:
        z_max = spec.slit_width
        values = np.zeros(n_points)
    elif kind is PotentialKind.GRAVITY_BOX:
        z_max = spec.slit_width
        values = mg * _nodes(z_max, n_points)
    elif kind is PotentialKind.GRAVITY_MIRROR:
        z_max = mirror_cutoff(c, n_states_hint)
        values = mg * _nodes(z_max, n_points)
    else:
        nominal = spec.slit_width + absorber_tail(spec, c)
        slit_cells = max(1, round((n_points - 1) * spec.slit_width / nominal))
        dz = spec.slit_width / slit_cells
        z_max = dz * (n_points - 1)
        z = dz * np.arange(n_points)
        values = mg * z
        values[slit_cells + 1 :] += spec.absorber_height
        # the node on the jump takes the mean of both one-sided limits
        values[slit_cells] += 0.5 * spec.absorber_height
    return Grid(0.0, z_max, n_points, values, spec=spec, bound_energy=spec.bound_energy(c))


def sample_spacing(spec: PotentialSpec, c: PhysicalConstants, spacing: float, n_states_hint: int = 1) -> Grid:
    """Like :func:`sample` but sized by a target node spacing [m]."""
    if spec.kind is PotentialKind.GRAVITY_MIRROR:
        length = mirror_cutoff(c, n_states_hint)
    elif spec.kind is PotentialKind.GRAVITY_ABSORBER:
        length = spec.slit_width + absorber_tail(spec, c)
    else:
        length = spec.slit_width
    n_points = max(MIN_POINTS, math.ceil(length / spacing) + 1)
    return sample(spec, c, n_points, n_states_hint)


def _nodes(z_max, n_points):
    return (z_max / (n_points - 1)) * np.arange(n_points)
