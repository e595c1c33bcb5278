import json
import math

import numpy as np
import pytest
from scipy import integrate, optimize

from ucnbouncer import scenario as sc
from ucnbouncer.eigen import Boundary, box_energy, solve_numeric
from ucnbouncer.errors import ValidationError
from ucnbouncer.files import load_config
from ucnbouncer.physconst import REFERENCE, Energy
from ucnbouncer.potential import sample_spacing
from ucnbouncer.transmission import TransmissionModel

UM = 1e-6
SWEEP = np.linspace(5, 60, 12) * UM


@pytest.fixture(scope="module")
def horizontal():
    return sc.predict_scenario(sc.ScenarioConfig(), SWEEP)


def test_geometry_defaults():
    g = sc.GeometryConfig()
    assert (g.mirror_length, g.absorber_length) == (0.10, 0.13)
    assert g.excess_absorber == pytest.approx(0.03, abs=1e-15)
    with pytest.raises(ValidationError):
        sc.GeometryConfig(mirror_length=-0.1)
    with pytest.raises(ValidationError):
        sc.BeamSpec(lifetime=0.0)


class TestSurvival:
    def test_zero_transit(self):
        assert sc.survival_fraction(sc.BeamSpec(), 0.0) == 1.0

    def test_mirror_transit(self):
        f = sc.survival_fraction(sc.BeamSpec(), 0.10 / 10.0)
        assert f == pytest.approx(math.exp(-0.01 / 900), rel=1e-15)
        assert 1 - f == pytest.approx(1.1e-5, rel=2e-2)

    def test_one_lifetime(self):
        assert sc.survival_fraction(sc.BeamSpec(), 900.0) == pytest.approx(1 / math.e, rel=1e-15)

    def test_negative(self):
        with pytest.raises(ValidationError):
            sc.survival_fraction(sc.BeamSpec(), -1.0)


def test_models_per_orientation():
    assert sc.ScenarioConfig().transmission_model is TransmissionModel.QUANTUM_GRAVITY
    vertical = sc.ScenarioConfig(orientation=sc.Orientation.VERTICAL)
    assert vertical.transmission_model is TransmissionModel.QUANTUM_BOX
    forced = sc.ScenarioConfig(model_family=sc.ModelFamily.BOX_ONLY, orientation=sc.Orientation.REVERSED_HORIZONTAL)
    assert not forced.uses_gravity


def test_vertical_is_rotation_invariant():
    cfg = sc.ScenarioConfig(orientation=sc.Orientation.VERTICAL)
    a = sc.predict_scenario(cfg, SWEEP)
    b = sc.predict_scenario(cfg.with_(g_accel=2 * REFERENCE.g_accel), SWEEP)
    assert a.to_csv() == b.to_csv()
    assert a.n_count.tobytes() == b.n_count.tobytes()


def test_horizontal_depends_on_g(horizontal):
    other = sc.predict_scenario(sc.ScenarioConfig(g_accel=2 * REFERENCE.g_accel), SWEEP)
    assert not np.array_equal(horizontal.n_count, other.n_count)


def step_well_ground(a, height):
    # hard wall at 0, step of ``height`` at a: k cot(k a) = -q; returns peV
    m, hb = REFERENCE.neutron_mass, REFERENCE.hbar

    def f(e):
        k = math.sqrt(2 * m * e) / hb
        q = math.sqrt(2 * m * (height - e)) / hb
        return k * math.cos(k * a) + q * math.sin(k * a)

    e_box = box_energy(REFERENCE, a, 1).value
    return Energy(optimize.brentq(f, 0.25 * e_box, e_box, xtol=1e-45, rtol=1e-14)).pev()


def test_vertical_threshold_set_by_box_level():
    # lowest 15 um level: box-like without gravity, above the bouncer ground state with it
    e_box = box_energy(REFERENCE, 15 * UM, 1).pev()
    vert = sc.slit_states(sc.ScenarioConfig(orientation=sc.Orientation.VERTICAL), 15 * UM)[0].energy.pev()
    horiz = sc.slit_states(sc.ScenarioConfig(), 15 * UM)[0].energy.pev()
    assert f"{vert:.1f}" == "0.9"
    assert vert < e_box
    assert vert == pytest.approx(step_well_ground(15 * UM, sc.ScenarioConfig().absorber_height), rel=1e-4)
    assert horiz > 1.4


def test_reversed_with_no_excess_matches_horizontal(horizontal):
    cfg = sc.ScenarioConfig(orientation=sc.Orientation.REVERSED_HORIZONTAL, geometry=sc.GeometryConfig(0.10, 0.10))
    assert sc.predict_scenario(cfg, SWEEP).n_count.tobytes() == horizontal.n_count.tobytes()


@pytest.mark.parametrize("kappa_free", [1e-3, 1.0, 50.0])
def test_reversed_never_exceeds_horizontal(horizontal, kappa_free):
    cfg = sc.ScenarioConfig(orientation=sc.Orientation.REVERSED_HORIZONTAL, kappa_free=kappa_free)
    rev = sc.predict_scenario(cfg, SWEEP).n_count
    assert np.all(rev <= horizontal.n_count)
    assert rev == pytest.approx(horizontal.n_count * math.exp(-kappa_free * 0.03), rel=1e-12)


def test_kappa_free_defaults_to_kappa():
    cfg = sc.ScenarioConfig(kappa=123.0)
    assert cfg.effective_kappa_free == 123.0


@pytest.mark.parametrize("family", list(sc.ModelFamily))
def test_cross_solver_at_30um(family):
    cfg = sc.ScenarioConfig(model_family=family)
    c = cfg.constants
    dh = 30 * UM
    grid = sample_spacing(sc.slit_potential(cfg, dh), c, cfg.grid_spacing / 10)
    states = solve_numeric(grid, c, cfg.max_states, Boundary.DIRICHLET_LEFT_DECAY_RIGHT)
    w = sc.beam_weights(cfg)
    ov = np.ones(w.size)
    for j, s in enumerate(states[: w.size]):
        inside = s.z >= dh * (1 - 1e-12)
        ov[j] = integrate.simpson(s.psi_squared[inside], x=s.z[inside])
    brute = sc.attenuation(cfg) * (np.exp(-cfg.kappa * 0.10 * ov) @ w)
    assert sc.predict_scenario(cfg, [dh]).n_count[0] == pytest.approx(brute, rel=2e-3)


def test_gravity_and_box_differ_at_30um():
    g = sc.predict_scenario(sc.ScenarioConfig(), [30 * UM]).n_count[0]
    b = sc.predict_scenario(sc.ScenarioConfig(model_family=sc.ModelFamily.BOX_ONLY), [30 * UM]).n_count[0]
    assert abs(g - b) > 0.05 * g


def test_weights_independent_of_orientation_and_g():
    a = sc.beam_weights(sc.ScenarioConfig())
    b = sc.beam_weights(sc.ScenarioConfig(orientation=sc.Orientation.VERTICAL, g_accel=19.6))
    assert a.tobytes() == b.tobytes()


def test_dense_sweep_nondecreasing():
    dh = np.linspace(1, 100, 200) * UM
    for family in sc.ModelFamily:
        n = sc.predict_scenario(sc.ScenarioConfig(model_family=family), dh).n_count
        assert np.all(np.diff(n) >= -1e-10)


def test_deterministic_and_order_independent(horizontal):
    again = sc.predict_scenario(sc.ScenarioConfig(), SWEEP)
    assert again.to_csv() == horizontal.to_csv()
    sc._overlaps_at.cache_clear()
    scattered = sc.overlap_table(sc.ScenarioConfig(), SWEEP[::-1])[::-1]
    assert np.array_equal(scattered, sc.overlap_table(sc.ScenarioConfig(), SWEEP))


def test_jitter():
    cfg = sc.ScenarioConfig()
    dh = np.array([14, 20, 30]) * UM
    sharp = sc.predict_scenario(cfg, dh).n_count
    tiny = sc.predict_scenario(cfg.with_(slit_jitter=1e-12), dh).n_count
    assert tiny == pytest.approx(sharp, rel=1e-6)
    blurred = sc.predict_scenario(cfg.with_(slit_jitter=1 * UM), dh).n_count
    assert not np.allclose(blurred, sharp, rtol=1e-4)
    assert np.all(np.diff(blurred) >= 0)


def test_invalid_sweep():
    with pytest.raises(ValidationError):
        sc.predict_scenario(sc.ScenarioConfig(), [])
    with pytest.raises(ValidationError):
        sc.predict_scenario(sc.ScenarioConfig(), [0.0, 1e-5])


@pytest.mark.parametrize("bad", [dict(kappa=0.0), dict(max_states=0), dict(slit_jitter=-1.0), dict(kappa_free=-2.0)])
def test_invalid_config(bad):
    with pytest.raises(ValidationError) as err:
        sc.ScenarioConfig(**bad)
    assert list(bad)[0] in err.value.fields


def test_json_round_trip(tmp_path):
    cfg = sc.ScenarioConfig(orientation=sc.Orientation.REVERSED_HORIZONTAL, kappa=321.0, kappa_free=4.5,
                            geometry=sc.GeometryConfig(0.1, 0.15, 2e-5), beam=sc.BeamSpec(30e-9, 8.0, 880.0))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert sc.ScenarioConfig.from_dict(load_config(path)) == cfg


def test_toml_config(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text(
        'orientation = "vertical"\n'
        "kappa_per_m = 2000.0\n"
        "[geometry]\nmirror_length_m = 0.1\nabsorber_length_m = 0.12\n"
        "[beam]\ntransverse_temperature_K = 1.5e-8\n"
    )
    cfg = sc.ScenarioConfig.from_dict(load_config(path))
    assert cfg.orientation is sc.Orientation.VERTICAL
    assert cfg.kappa == 2000.0
    assert cfg.geometry.excess_absorber == pytest.approx(0.02)
    assert cfg.beam.transverse_temperature == 1.5e-8
    assert sc.ScenarioConfig.from_dict(cfg.to_dict()) == cfg


def test_unknown_keys_rejected():
    with pytest.raises(ValidationError) as err:
        sc.ScenarioConfig.from_dict({"kapa_per_m": 1.0, "beam": {"speed": 3}})
    assert set(err.value.fields) == {"kapa_per_m", "beam.speed"}
