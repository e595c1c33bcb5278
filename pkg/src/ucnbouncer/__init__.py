"""Ultracold neutrons between a mirror and an absorber: bouncer and cavity
spectra, transmission curves, and model discrimination."""

from .eigen import (
    AirySpectrumScale,
    Boundary,
    EigenSolution,
    Method,
    box_spectrum,
    gravity_mirror_spectrum,
    solve_numeric,
)
from .errors import ConvergenceError, DomainError, NumericError, ResolutionError, ValidationError
from .physconst import (
    Energy,
    PhysicalConstants,
    classical_height,
    de_broglie_wavelength,
    graviton_wavelength,
    thermal_energy,
)
from .potential import Grid, PotentialKind, PotentialSpec, sample

__version__ = "0.1.0"
