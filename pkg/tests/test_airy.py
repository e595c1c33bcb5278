import numpy as np
import pytest
from scipy.special import airy as scipy_airy

import oracles
from ucnbouncer.airy import (
    NEG_SWITCH,
    POS_SWITCH,
    _ai_and_prime,
    airy_ai,
    airy_ai_prime,
    airy_zero,
    airy_zeros,
)
from ucnbouncer.errors import DomainError


def test_value_at_origin():
    assert airy_ai(0.0) == pytest.approx(0.35502805388781723926, abs=1e-15)
    assert float(oracles.airy_series(0)) == pytest.approx(0.35502805388781723926, abs=1e-18)


@pytest.mark.parametrize("n, expected, bracket", [(1, 2.338107410, (2, 3)), (2, 4.087949444, (4, 5)), (4, 6.786708090, (6, 7))])
def test_zeros_match_bisection_oracle(n, expected, bracket):
    oracle = oracles.airy_zero_bisect(*bracket)
    assert oracle == pytest.approx(expected, abs=5e-10)
    assert airy_zero(n) == pytest.approx(oracle, abs=1e-9)


def test_first_zero_is_a_root():
    assert abs(airy_ai(-airy_zero(1))) < 1e-10


def test_decay_side():
    v = airy_ai(10.0)
    assert 0 < v < 1e-9


def test_against_series_oracle():
    xs = np.linspace(-20, 5, 101)
    ref = np.array([float(oracles.airy_series(x)) for x in xs])
    assert np.max(np.abs(airy_ai(xs) - ref)) <= 1e-10


def test_dense_against_scipy():
    xs = np.linspace(-20, 5, 50001)
    ai, aip = _ai_and_prime(xs)
    ref_ai, ref_aip, _, _ = scipy_airy(xs)
    assert np.max(np.abs(ai - ref_ai)) <= 1e-10
    assert np.max(np.abs(aip - ref_aip)) <= 1e-10


@pytest.mark.parametrize("x0", [NEG_SWITCH, POS_SWITCH])
def test_branch_continuity(x0):
    left = _ai_and_prime(np.array([x0 - 1e-13]))
    right = _ai_and_prime(np.array([x0 + 1e-13]))
    assert abs(left[0][0] - right[0][0]) < 1e-10
    assert abs(left[1][0] - right[1][0]) < 1e-10


def test_out_of_range():
    with pytest.raises(DomainError):
        airy_ai(50.5)
    with pytest.raises(DomainError):
        airy_ai_prime(np.array([0.0, -51.0]))
    with pytest.raises(DomainError):
        airy_ai(float("nan"))


def test_zero_index_range():
    for bad in (0, 101, 2.5):
        with pytest.raises(DomainError):
            airy_zero(bad)


def test_zeros_increasing_and_roots():
    z = airy_zeros(100)
    assert np.all(np.diff(z) > 0)
    ai, _ = _ai_and_prime(-z)
    # |Ai'| at the zeros grows like x^(1/4), so check the root via Newton distance
    _, aip = _ai_and_prime(-z)
    assert np.max(np.abs(ai / aip)) < 1e-9


def test_scalar_and_array_shapes():
    assert isinstance(airy_ai(1.0), float)
    assert airy_ai(np.zeros((2, 3))).shape == (2, 3)
