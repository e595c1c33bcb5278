import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ucnbouncer.errors import DomainError
from ucnbouncer.physconst import (
    Energy,
    PhysicalConstants,
    classical_height,
    de_broglie_wavelength,
    graviton_wavelength,
    thermal_energy,
)

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)


def test_reference_values(c):
    assert c.neutron_mass == 1.67492749804e-27
    assert c.g_accel == 9.80665
    assert c.hbar == 1.054571817e-34
    assert c.boltzmann == 1.380649e-23
    assert c.light_speed == 2.99792458e8
    assert c.planck_h == pytest.approx(2 * math.pi * c.hbar, rel=1e-12)


def test_constants_reject_non_positive(c):
    with pytest.raises(DomainError):
        c.with_gravity(0.0)
    with pytest.raises(DomainError):
        PhysicalConstants(1, 1, 1, 1.0, 1, 1, 1)  # planck_h != 2 pi hbar


def test_energy_round_trip():
    for pev in (1e-3, 1.407, 123.0):
        e = Energy.from_pev(pev)
        assert Energy.from_pev(e.pev()).value == pytest.approx(e.value, rel=1e-12)
    with pytest.raises(DomainError):
        Energy(float("nan"))


def test_de_broglie(c):
    lam = de_broglie_wavelength(c, 10.0)
    # h / (m v) with reference constants
    assert lam == pytest.approx(3.956e-8, rel=1e-3)
    assert de_broglie_wavelength(c, 20.0) == pytest.approx(lam / 2, rel=1e-15)
    assert de_broglie_wavelength(c, 1.0) == pytest.approx(10 * lam, rel=1e-15)
    for bad in (0.0, -1.0, float("inf"), float("nan")):
        with pytest.raises(DomainError):
            de_broglie_wavelength(c, bad)


def test_classical_height(c):
    h = classical_height(c, Energy.from_pev(1.407))
    assert h == pytest.approx(1.37e-5, rel=2e-3)
    assert classical_height(c, Energy(0.0)) == 0.0
    e = Energy.from_pev(2.0)
    assert classical_height(c, Energy(2 * e.value)) == pytest.approx(2 * classical_height(c, e), rel=1e-15)
    with pytest.raises(DomainError):
        classical_height(c, Energy(-1e-30))


def test_graviton_wavelength(c):
    de = Energy.from_pev(2.4595 - 1.4067)
    lam = graviton_wavelength(c, de)
    assert 1.0e6 < lam < 1.3e6
    assert graviton_wavelength(c, Energy(2 * de.value)) == pytest.approx(lam / 2, rel=1e-15)
    one_metre = Energy(c.planck_h * c.light_speed / 1.0)
    assert graviton_wavelength(c, one_metre) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        graviton_wavelength(c, Energy(0.0))


def test_thermal_energy(c):
    e = thermal_energy(c, 20e-9)
    assert e.pev() == pytest.approx(1.723, rel=1e-3)
    assert thermal_energy(c, 0.0).value == 0.0
    assert thermal_energy(c, 40e-9).value == pytest.approx(2 * e.value, rel=1e-15)
    with pytest.raises(DomainError):
        thermal_energy(c, -1.0)


def test_graviton_wavelength_of_thermal_gap(c):
    # a ~1 peV transition, the thermal energy scale of the beam
    lam = graviton_wavelength(c, Energy.from_pev(1.0))
    assert 1e6 <= lam <= 1.3e6


@given(positive, positive)
def test_de_broglie_monotone_and_invertible(v1, v2):
    c = PhysicalConstants.reference()
    l1, l2 = de_broglie_wavelength(c, v1), de_broglie_wavelength(c, v2)
    if v1 < v2:
        assert l1 > l2
    # invert: v = h / (m lambda)
    assert c.planck_h / (c.neutron_mass * l1) == pytest.approx(v1, rel=1e-12)


@given(st.floats(min_value=0, max_value=1e3), st.floats(min_value=0, max_value=1e3))
def test_height_and_thermal_monotone(a, b):
    c = PhysicalConstants.reference()
    ea, eb = Energy.from_pev(a), Energy.from_pev(b)
    if a < b:
        assert classical_height(c, ea) < classical_height(c, eb)
        assert thermal_energy(c, a).value < thermal_energy(c, b).value
