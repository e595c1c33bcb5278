"""Physical constants, energy values and closed-form kinematics.

Everything is SI internally.  peV and micrometres only show up at I/O
boundaries (CLI, CSV).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

from .errors import DomainError

PEV = 1e-12  # eV per peV

_ELEMENTARY_CHARGE = 1.602176634e-19  # J per eV


@dataclass(frozen=True)
class PhysicalConstants:
    neutron_mass: float
    g_accel: float
    hbar: float
    planck_h: float
    light_speed: float
    boltzmann: float
    ev_per_joule: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"constant {name} must be finite and positive, got {value!r}")
        if abs(self.planck_h - 2 * math.pi * self.hbar) > 1e-12 * self.planck_h:
            raise DomainError("planck_h must equal 2*pi*hbar")

    @classmethod
    def reference(cls) -> PhysicalConstants:
        """CODATA-style reference values (standard gravity)."""
        hbar = 1.054571817e-34
        return cls(
            neutron_mass=1.67492749804e-27,
            g_accel=9.80665,
            hbar=hbar,
            planck_h=2 * math.pi * hbar,
            light_speed=2.99792458e8,
            boltzmann=1.380649e-23,
            ev_per_joule=1 / _ELEMENTARY_CHARGE,
        )

    def with_gravity(self, g_accel: float) -> PhysicalConstants:
        return replace(self, g_accel=g_accel)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, order=True)
class Energy:
    """An energy in joules with eV/peV views."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise DomainError(f"energy must be finite, got {self.value!r}")

    @classmethod
    def from_ev(cls, ev: float, c: PhysicalConstants | None = None) -> Energy:
        c = c or REFERENCE
        return cls(ev / c.ev_per_joule)

    @classmethod
    def from_pev(cls, pev: float, c: PhysicalConstants | None = None) -> Energy:
        return cls.from_ev(pev * PEV, c)

    def ev(self, c: PhysicalConstants | None = None) -> float:
        c = c or REFERENCE
        return self.value * c.ev_per_joule

    def pev(self, c: PhysicalConstants | None = None) -> float:
        return self.ev(c) / PEV

    def __sub__(self, other: Energy) -> Energy:
        return Energy(self.value - other.value)

    def __add__(self, other: Energy) -> Energy:
        return Energy(self.value + other.value)


REFERENCE = PhysicalConstants.reference()


def _positive(name: str, x: float) -> float:
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return float(x)


def de_broglie_wavelength(c: PhysicalConstants, v: float) -> float:
    """Neutron de Broglie wavelength [m] at speed ``v`` [m/s]."""
    v = _positive("speed", v)
    return c.planck_h / (c.neutron_mass * v)


def classical_height(c: PhysicalConstants, e: Energy) -> float:
    """Height [m] at which a neutron of energy ``e`` stops, e = m g z."""
    if e.value < 0:
        raise DomainError(f"energy must be non-negative, got {e.value!r} J")
    return float(e.value / (c.neutron_mass * c.g_accel))


def graviton_wavelength(c: PhysicalConstants, delta_e: Energy) -> float:
    """Wavelength h c / dE [m] of a quantum carrying the transition energy."""
    _positive("transition energy", delta_e.value)
    return c.planck_h * c.light_speed / delta_e.value


def thermal_energy(c: PhysicalConstants, t: float) -> Energy:
    """Raw k_B T; any per-degree-of-freedom factor is the caller's choice."""
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"temperature must be non-negative, got {t!r} K")
    return Energy(c.boltzmann * t)


def gravity_length_scale(c: PhysicalConstants) -> float:
    """(hbar^2 / (2 m^2 g))^(1/3), the natural height unit above a mirror [m]."""
    return (c.hbar**2 / (2 * c.neutron_mass**2 * c.g_accel)) ** (1 / 3)


def gravity_energy_scale(c: PhysicalConstants) -> Energy:
    """(hbar^2 m g^2 / 2)^(1/3) = m g z0."""
    return Energy((c.hbar**2 * c.neutron_mass * c.g_accel**2 / 2) ** (1 / 3))
