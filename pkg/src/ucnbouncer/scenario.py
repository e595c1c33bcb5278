"""End-to-end predictions for the experiment configurations.

Horizontal: gravity plus a soft absorber above the slit.  Vertical: the
transverse well has no gravity, so the same slit is a soft-walled box.
Reversed: horizontal, attenuated by the excess absorber hanging below
the free-fall region.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .eigen import Boundary, gravity_mirror_spectrum, solve_numeric
from .errors import ValidationError
from .physconst import REFERENCE, PhysicalConstants
from .potential import PotentialKind, PotentialSpec, default_absorber_height, sample_spacing
from .transmission import (
    DEFAULT_KAPPA,
    DEFAULT_MAX_STATES,
    TransmissionCurve,
    TransmissionModel,
    absorber_overlap,
    boltzmann_weights,
    check_nondecreasing,
    survival_from_overlaps,
)

DEFAULT_GRID_SPACING = 2e-8  # m
_JITTER_NODES = 9


class Orientation(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    REVERSED_HORIZONTAL = "reversed-horizontal"


class ModelFamily(enum.Enum):
    GRAVITY = "gravity"
    BOX_ONLY = "box-only"


def _check_positive(obj, names):
    bad = [n for n in names if not (math.isfinite(getattr(obj, n)) and getattr(obj, n) > 0)]
    if bad:
        raise ValidationError(f"{type(obj).__name__} values must be positive", fields=bad)


@dataclass(frozen=True)
class GeometryConfig:
    mirror_length: float = 0.10
    absorber_length: float = 0.13
    slit_width: float | None = None

    def __post_init__(self):
        _check_positive(self, ["mirror_length", "absorber_length"])
        if self.slit_width is not None:
            _check_positive(self, ["slit_width"])

    @property
    def excess_absorber(self) -> float:
        return self.absorber_length - self.mirror_length


@dataclass(frozen=True)
class BeamSpec:
    transverse_temperature: float = 20e-9
    horizontal_velocity: float = 10.0
    lifetime: float = 900.0

    def __post_init__(self):
        _check_positive(self, ["transverse_temperature", "horizontal_velocity", "lifetime"])


@dataclass(frozen=True)
class ScenarioConfig:
    orientation: Orientation = Orientation.HORIZONTAL
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    beam: BeamSpec = field(default_factory=BeamSpec)
    kappa: float = DEFAULT_KAPPA
    model_family: ModelFamily = ModelFamily.GRAVITY
    kappa_free: float | None = None
    absorber_height: float = field(default_factory=default_absorber_height)
    g_accel: float = REFERENCE.g_accel
    max_states: int = DEFAULT_MAX_STATES
    grid_spacing: float = DEFAULT_GRID_SPACING
    slit_jitter: float = 0.0

    def __post_init__(self):
        if isinstance(self.orientation, str):
            object.__setattr__(self, "orientation", Orientation(self.orientation))
        if isinstance(self.model_family, str):
            object.__setattr__(self, "model_family", ModelFamily(self.model_family))
        bad = []
        for name in ("kappa", "absorber_height", "g_accel", "grid_spacing"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                bad.append(name)
        if self.kappa_free is not None and not (math.isfinite(self.kappa_free) and self.kappa_free >= 0):
            bad.append("kappa_free")
        if not (math.isfinite(self.slit_jitter) and self.slit_jitter >= 0):
            bad.append("slit_jitter")
        if not 1 <= self.max_states <= 50:
            bad.append("max_states")
        if bad:
            raise ValidationError("invalid scenario config", fields=bad)

    @property
    def constants(self) -> PhysicalConstants:
        return REFERENCE.with_gravity(self.g_accel)

    @property
    def effective_kappa_free(self) -> float:
        return self.kappa if self.kappa_free is None else self.kappa_free

    @property
    def uses_gravity(self) -> bool:
        return self.model_family is ModelFamily.GRAVITY and self.orientation is not Orientation.VERTICAL

    @property
    def transmission_model(self) -> TransmissionModel:
        return TransmissionModel.QUANTUM_GRAVITY if self.uses_gravity else TransmissionModel.QUANTUM_BOX

    def with_(self, **changes) -> ScenarioConfig:
        return replace(self, **changes)

    # Serialization: flat sections with unit-suffixed keys.
    def to_dict(self) -> dict:
        return {
            "orientation": self.orientation.value,
            "model_family": self.model_family.value,
            "kappa_per_m": self.kappa,
            "kappa_free_per_m": self.kappa_free,
            "absorber_height_J": self.absorber_height,
            "g_accel": self.g_accel,
            "max_states": self.max_states,
            "grid_spacing_m": self.grid_spacing,
            "slit_jitter_m": self.slit_jitter,
            "geometry": {
                "mirror_length_m": self.geometry.mirror_length,
                "absorber_length_m": self.geometry.absorber_length,
                "slit_width_m": self.geometry.slit_width,
            },
            "beam": {
                "transverse_temperature_K": self.beam.transverse_temperature,
                "horizontal_velocity_m_per_s": self.beam.horizontal_velocity,
                "lifetime_s": self.beam.lifetime,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> ScenarioConfig:
        top = {
            "orientation": "orientation",
            "model_family": "model_family",
            "kappa_per_m": "kappa",
            "kappa_free_per_m": "kappa_free",
            "absorber_height_J": "absorber_height",
            "g_accel": "g_accel",
            "max_states": "max_states",
            "grid_spacing_m": "grid_spacing",
            "slit_jitter_m": "slit_jitter",
        }
        geo = {"mirror_length_m": "mirror_length", "absorber_length_m": "absorber_length", "slit_width_m": "slit_width"}
        beam = {
            "transverse_temperature_K": "transverse_temperature",
            "horizontal_velocity_m_per_s": "horizontal_velocity",
            "lifetime_s": "lifetime",
        }
        unknown = [k for k in data if k not in top and k not in ("geometry", "beam", "sweep")]
        unknown += [f"geometry.{k}" for k in data.get("geometry", {}) if k not in geo]
        unknown += [f"beam.{k}" for k in data.get("beam", {}) if k not in beam]
        if unknown:
            raise ValidationError("unknown scenario keys", fields=unknown)
        kw = {top[k]: v for k, v in data.items() if k in top and v is not None}
        try:
            if "orientation" in kw:
                kw["orientation"] = Orientation(kw["orientation"])
            if "model_family" in kw:
                kw["model_family"] = ModelFamily(kw["model_family"])
        except ValueError as exc:
            raise ValidationError(str(exc), fields=["orientation/model_family"]) from None
        g = {geo[k]: v for k, v in data.get("geometry", {}).items() if v is not None}
        b = {beam[k]: v for k, v in data.get("beam", {}).items() if v is not None}
        return cls(geometry=GeometryConfig(**g), beam=BeamSpec(**b), **kw)


def survival_fraction(beam: BeamSpec, transit_time: float) -> float:
    """Fraction of neutrons not decaying during ``transit_time`` [s]."""
    if not (math.isfinite(transit_time) and transit_time >= 0):
        raise ValidationError("transit_time must be non-negative", fields=["transit_time"])
    return math.exp(-transit_time / beam.lifetime)


def slit_potential(cfg: ScenarioConfig, delta_h: float) -> PotentialSpec:
    return PotentialSpec(
        PotentialKind.GRAVITY_ABSORBER,
        slit_width=float(delta_h),
        absorber_height=cfg.absorber_height,
        gravity_on=cfg.uses_gravity,
    )


def slit_states(cfg: ScenarioConfig, delta_h: float):
    """Bound states of the slit at ``delta_h`` for the scenario's physics."""
    c = cfg.constants
    grid = sample_spacing(slit_potential(cfg, delta_h), c, cfg.grid_spacing)
    return solve_numeric(grid, c, min(cfg.max_states, grid.n_points // 8 - 1), Boundary.DIRICHLET_LEFT_DECAY_RIGHT)


def _slit_key(cfg: ScenarioConfig) -> tuple:
    # Only the fields that change the slit eigenproblem.
    g = cfg.g_accel if cfg.uses_gravity else None
    return (cfg.uses_gravity, cfg.absorber_height, g, cfg.max_states, cfg.grid_spacing)


@functools.lru_cache(maxsize=4096)
def _overlaps_at(key: tuple, delta_h: float) -> tuple:
    uses_gravity, height, g, max_states, spacing = key
    cfg = ScenarioConfig(
        model_family=ModelFamily.GRAVITY if uses_gravity else ModelFamily.BOX_ONLY,
        absorber_height=height,
        g_accel=g if g is not None else REFERENCE.g_accel,
        max_states=max_states,
        grid_spacing=spacing,
    )
    out = [1.0] * max_states
    for j, sol in enumerate(slit_states(cfg, delta_h)):
        out[j] = absorber_overlap(sol, delta_h)
    return tuple(out)


def overlap_table(cfg: ScenarioConfig, delta_h_values) -> np.ndarray:
    """Absorber overlaps (len(dh), max_states); unbound states count as 1."""
    key = _slit_key(cfg)
    return np.array([_overlaps_at(key, float(dh)) for dh in delta_h_values])


def beam_weights(cfg: ScenarioConfig) -> np.ndarray:
    """Mode populations of the incoming beam.

    Boltzmann factors at the transverse temperature over the mirror
    levels of standard gravity.  The beam is prepared upstream, so the
    populations do not change with orientation or with the g used for
    the slit itself.
    """
    levels = gravity_mirror_spectrum(REFERENCE, cfg.max_states, n_points=64)
    return boltzmann_weights([s.energy for s in levels], REFERENCE, cfg.beam.transverse_temperature,
                             max_states=cfg.max_states)


def attenuation(cfg: ScenarioConfig) -> float:
    """Global factor: neutron decay in transit and, reversed, the excess absorber."""
    factor = survival_fraction(cfg.beam, cfg.geometry.mirror_length / cfg.beam.horizontal_velocity)
    if cfg.orientation is Orientation.REVERSED_HORIZONTAL:
        factor *= math.exp(-cfg.effective_kappa_free * cfg.geometry.excess_absorber)
    return factor


def _raw_curve(cfg, dh):
    w = beam_weights(cfg)
    table = overlap_table(cfg, dh)[:, : w.size]
    return survival_from_overlaps(table, w, cfg.geometry.mirror_length, cfg.kappa)


def predict_scenario(cfg: ScenarioConfig, delta_h_values) -> TransmissionCurve:
    dh = np.asarray(delta_h_values, dtype=float)
    if dh.ndim != 1 or dh.size == 0 or np.any(dh <= 0):
        raise ValidationError("slit widths must be a non-empty list of positive lengths", fields=["delta_h"])
    if cfg.slit_jitter > 0:
        nodes, wts = np.polynomial.hermite_e.hermegauss(_JITTER_NODES)
        wts = wts / wts.sum()
        n = np.zeros_like(dh)
        for x, wt in zip(nodes, wts):
            shifted = dh + cfg.slit_jitter * x
            ok = shifted > 0
            part = np.zeros_like(dh)
            if ok.any():
                part[ok] = _raw_curve(cfg, shifted[ok])
            n += wt * part
    else:
        n = _raw_curve(cfg, dh)
    n = n * attenuation(cfg)
    check_nondecreasing(dh, n)
    return TransmissionCurve(cfg.transmission_model, dh, n, cfg.to_dict())
