"""
End-to-end checks on the figure presets: closed-form plateaus, pole residues,
beat structure, field norm, localization, limits, ensemble ordering and
integrator order.
"""

import math

import numpy as np
import pytest

from conftest import preset_config, run_to
from giantwave.analytic.amplitudes import LongTimeAmplitude, envelope_metrics, residue_amplitude
from giantwave.analytic.fitting import dominant_period, fit_envelope
from giantwave.cli.presets import PRESETS
from giantwave.common.constants import REFERENCE_STEPS_PER_TAU0
from giantwave.dde.integrator import integrate
from giantwave.dde.stochastic import ensemble_average
from giantwave.field.intensity import intensity_map
from giantwave.model.config import SystemConfig
from giantwave.model.kernel import build_kernel
from giantwave.spectral.characteristic import char_residual
from giantwave.spectral.classify import CaseLabel, classify
from giantwave.spectral.poles import find_poles

PI = math.pi

SINGLE_ATOM_PRESETS = [name for name, preset in PRESETS.items() if not preset.is_multi]
BOUND_PRESETS = ["fig2a", "fig2b", "fig2c", "fig2d", "fig6a", "fig6b", "fig9a", "fig9b"]


def test_static_plateau(fig2a):
    trajectory = run_to(fig2a, 40.0)
    expected = 1.0 / (1.0 + 14.0 * fig2a.gamma_tau0) ** 2
    assert expected == pytest.approx(0.0977, abs=1e-4)
    assert trajectory.abs2[-1] == pytest.approx(expected, rel=1e-2)


@pytest.mark.slow
@pytest.mark.parametrize("name", SINGLE_ATOM_PRESETS)
def test_poles_certify_modes(name):
    config = preset_config(name)
    modes = classify(config)
    if not modes.modes:
        return
    poles = find_poles(config)
    for mode in modes.modes:
        assert abs(char_residual(-1j * mode.omega_tau0, config)) < 1e-9
        assert min(abs(p + 1j * mode.omega_tau0) for p in poles) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig2a", "fig2b", "fig2c", "fig2d"])
def test_three_routes_agree(name):
    config = preset_config(name)
    trajectory = run_to(config, 60.0)
    gamma_t = trajectory.times * config.gamma_tau0
    window = (gamma_t >= 20.0) & (gamma_t <= 40.0)
    t = trajectory.times[window][::20]
    poles = find_poles(config)
    deviation = np.abs(trajectory.at(t) - residue_amplitude(poles, config, t))
    assert deviation.max() < 1e-2

    plateau = LongTimeAmplitude(classify(config)).plateau
    assert abs(trajectory.abs2[-1] - plateau) < 1e-3


@pytest.mark.slow
def test_two_mode_beat_period(fig6a):
    assert classify(fig6a).case_label == CaseLabel.TWO_MODE
    trajectory = run_to(fig6a, 40.0)
    late = trajectory.times * fig6a.gamma_tau0 >= 30.0
    period = dominant_period(trajectory.times[late][::10], trajectory.abs2[late][::10])
    assert period == pytest.approx(2.0, rel=2e-2)


@pytest.mark.slow
def test_three_mode_envelope(fig9a):
    metrics = envelope_metrics(classify(fig9a))
    assert metrics.upsilon == pytest.approx(2 * PI / 5)
    trajectory = run_to(fig9a, 80.0)
    late = trajectory.times * fig9a.gamma_tau0 >= 60.0
    values = trajectory.abs2[late][::5]
    fit = fit_envelope(trajectory.times[late][::5], values, metrics.upsilon)
    assert fit.relative_rms(values.max()) < 1e-3
    assert fit.slow_amplitude == pytest.approx(abs(metrics.amp_slow), abs=5e-3)
    assert fit.fast_amplitude == pytest.approx(abs(metrics.amp_fast), abs=5e-3)


def on_x_nodes(times, dx: float = 1.0 / 50) -> np.ndarray:
    return np.floor(np.asarray(times) / dx + 1e-9) * dx


def norm_at(config: SystemConfig, gamma_times) -> np.ndarray:
    """Field-map norm at the given Gamma*t, on a grid of 2N cells plus the outgoing tail."""
    trajectory = run_to(config, max(gamma_times))
    t_grid = np.minimum(on_x_nodes(np.asarray(gamma_times) / config.gamma_tau0), trajectory.horizon)
    x_grid = np.arange(0, 100 * config.n_points + 1) / 50
    return intensity_map(trajectory, x_grid, t_grid, config).norm_series


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig2a", "fig2b"])
def test_field_norm_is_conserved_after_transient(name):
    # the overlap terms inside the atom average out once the envelope is stationary
    norms = norm_at(preset_config(name), [20.0, 22.5, 25.0])
    np.testing.assert_allclose(norms, 1.0, atol=5e-3)


@pytest.mark.slow
@pytest.mark.parametrize("changes", [{"reflectivity": 0.9}, {"gamma_ext_ratio": 0.1}])
def test_field_norm_decreases_with_loss(fig2a, changes):
    norms = norm_at(fig2a.replace(**changes), [5.0, 10.0, 15.0, 20.0])
    assert np.all(np.diff(norms) < 0)
    assert norms[-1] < 0.99


@pytest.mark.slow
@pytest.mark.parametrize("name", BOUND_PRESETS)
def test_bound_field_is_localized(name):
    config = preset_config(name)
    trajectory = run_to(config, 40.0)
    t_end = np.array([math.floor(trajectory.horizon * 50) / 50])
    x_grid = np.arange(0, 100 * config.n_points + 1) / 50
    field_map = intensity_map(trajectory, x_grid, t_end, config)
    profile = field_map.values[0]
    outside = x_grid > config.n_points
    assert profile[outside].max() / profile.max() < 1e-3


def test_small_atom_without_mirror():
    config = SystemConfig(n_points=1, omega0_tau0=2 * PI, gamma_tau0=0.05 * PI, reflectivity=0.0)
    trajectory = run_to(config, 5.0)
    assert trajectory.abs2[-1] == pytest.approx(math.exp(-config.gamma_tau0 * trajectory.horizon), rel=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig2a", "fig2b"])
def test_no_mirror_decays(name):
    config = preset_config(name).replace(reflectivity=0.0)
    assert classify(config).case_label == CaseLabel.DECAYING
    assert run_to(config, 40.0).abs2[-1] < 1e-3


def plateau(config: SystemConfig, n_traj: int = 500, window=(15.0, 20.0)):
    """Ensemble mean and standard error of |eps|^2 averaged over a Gamma*t window."""
    horizon = window[1] / config.gamma_tau0
    result = ensemble_average(config, build_kernel(config), horizon, 50, n_traj=n_traj, base_seed=1234, stride=10)
    return result.plateau_statistics(window[0] / config.gamma_tau0)


@pytest.mark.slow
def test_dephasing_lowers_plateau(fig2a):
    ideal, _ = plateau(fig2a)
    weak, weak_se = plateau(fig2a.replace(dephasing_ratio=0.1))
    strong, strong_se = plateau(fig2a.replace(dephasing_ratio=0.2))
    assert ideal - weak > 3 * weak_se
    assert weak - strong > 3 * math.hypot(weak_se, strong_se)


@pytest.mark.slow
def test_external_loss_lowers_plateau(fig2a):
    ideal, _ = plateau(fig2a, n_traj=2)
    weak, weak_se = plateau(fig2a.replace(gamma_ext_ratio=0.1), n_traj=2)
    strong, strong_se = plateau(fig2a.replace(gamma_ext_ratio=0.2), n_traj=2)
    assert weak_se == strong_se == 0.0
    assert ideal > weak > strong


@pytest.mark.slow
@pytest.mark.parametrize("name, ideal_name", [("fig11c", "fig6a"), ("fig11d", "fig6b")])
def test_dephasing_orders_oscillating_bound_states(name, ideal_name):
    # N = 6 with R = 0.98 and Gamma_ext = 0.1Gamma; dw = 0.1Gamma against dw = 0.2Gamma
    window = (5.0, 10.0)
    lossy = preset_config(name)
    assert lossy.n_points == 6
    ideal, _ = plateau(preset_config(ideal_name), n_traj=2, window=window)
    weak, weak_se = plateau(lossy, window=window)
    strong, strong_se = plateau(lossy.replace(dephasing_ratio=0.2), window=window)
    assert ideal - weak > 3 * weak_se
    assert weak - strong > 3 * math.hypot(weak_se, strong_se)


@pytest.mark.slow
def test_integrator_is_fourth_order(fig2a):
    # fig2a steps with Gamma*h near 1e-3, so 200 steps per tau0 already sit at round-off
    horizon = float(round(10.0 / fig2a.gamma_tau0))
    kernel = build_kernel(fig2a)
    reference = integrate(fig2a, kernel, horizon, REFERENCE_STEPS_PER_TAU0).samples[-1]
    assert abs(integrate(fig2a, kernel, horizon, 200).samples[-1] - reference) < 1e-9

    # ten times the coupling makes the truncation error dominate
    strong = fig2a.replace(gamma_tau0=0.5 * PI)
    kernel = build_kernel(strong)
    reference = integrate(strong, kernel, 10.0, REFERENCE_STEPS_PER_TAU0).samples[-1]
    coarse = abs(integrate(strong, kernel, 10.0, 50).samples[-1] - reference)
    fine = abs(integrate(strong, kernel, 10.0, 100).samples[-1] - reference)
    assert fine > 1e-12
    assert coarse / fine >= 8.0
