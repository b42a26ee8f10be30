import math

import numpy as np
import pytest

from conftest import preset_config
from giantwave.analytic.amplitudes import (
    LongTimeAmplitude,
    bound_poles,
    envelope_metrics,
    multi_mode_amplitude,
    residue_amplitude,
    static_amplitude,
)
from giantwave.analytic.fitting import dominant_period, fit_envelope
from giantwave.common.errors import ConditionNotMet, ValidationError, WrongCase
from giantwave.model.config import SystemConfig
from giantwave.spectral.characteristic import residue_weight
from giantwave.spectral.classify import ModeSet, ModeSource, classify
from giantwave.spectral.poles import find_poles

PI = math.pi


# ============================================
# Static Weights
# ============================================

def test_trivial_mode_weight(fig2a):
    weight = static_amplitude(fig2a, ModeSource.COND_2K_PI)
    assert weight == pytest.approx(1.0 / (1.0 + 14.0 * fig2a.gamma_tau0), abs=1e-14)
    assert weight.real == pytest.approx(0.3126, abs=1e-4)
    assert weight == pytest.approx(residue_weight(-2j * PI, fig2a), abs=1e-12)


def test_odd_pi_weight(fig2b):
    weight = static_amplitude(fig2b, ModeSource.COND_ODD_PI)
    assert weight.real == pytest.approx(0.7609, abs=1e-4)
    assert weight == pytest.approx(residue_weight(-3j * PI, fig2b), abs=1e-12)


@pytest.mark.parametrize("name, source", [("fig2c", ModeSource.COND_N), ("fig2d", ModeSource.COND_N_PLUS_1)])
def test_root_of_unity_weight(name, source):
    config = preset_config(name)
    [mode] = classify(config).modes
    weight = static_amplitude(config, source)
    assert weight == pytest.approx(residue_weight(-1j * mode.omega_tau0, config), abs=1e-12)


def test_weight_requires_condition(fig2a, fig6a):
    with pytest.raises(ConditionNotMet):
        static_amplitude(fig2a, ModeSource.COND_N)
    with pytest.raises(ConditionNotMet):
        static_amplitude(fig6a, ModeSource.COND_N)
    assert static_amplitude(fig6a, ModeSource.COND_N, k=23) == pytest.approx(
        residue_weight(-1j * 23 * PI / 3, fig6a), abs=1e-12)


def test_uncoupled_weight_is_one():
    config = SystemConfig(n_points=3, omega0_tau0=2.3 * PI, gamma_tau0=0.0)
    assert static_amplitude(config, ModeSource.COND_N) == 1.0


# ============================================
# Long-Time Amplitudes
# ============================================

def test_static_plateau(fig2a):
    long_time = LongTimeAmplitude(classify(fig2a))
    assert long_time.plateau == pytest.approx(0.0977, abs=1e-4)
    t = np.linspace(0, 50, 7)
    np.testing.assert_allclose(long_time.intensity(t), long_time.plateau, rtol=1e-12)


def test_intensity_expansion_matches_modulus(fig6a, fig9a):
    t = np.linspace(0.0, 30.0, 301)
    for config in (fig6a, fig9a):
        long_time = LongTimeAmplitude(classify(config))
        np.testing.assert_allclose(long_time.intensity_expansion(t), long_time.intensity(t), atol=1e-12)
        assert np.all(np.sqrt(long_time.intensity(t)) <= long_time.bound + 1e-12)


def test_two_mode_beat_period(fig6a):
    long_time = LongTimeAmplitude(classify(fig6a))
    t = np.linspace(0.0, 10.0, 101)
    np.testing.assert_allclose(long_time.intensity(t + 2.0), long_time.intensity(t), atol=1e-12)


def test_empty_mode_set_has_no_amplitude():
    np.testing.assert_array_equal(multi_mode_amplitude(ModeSet(), np.arange(4.0)), np.zeros(4))
    assert LongTimeAmplitude(ModeSet()).plateau == 0.0


def test_envelope_metrics(fig9a, fig2a):
    modes = classify(fig9a)
    metrics = envelope_metrics(modes)
    assert metrics.upsilon == pytest.approx(2 * PI / 5)
    a1, a0, a2 = modes.weights.real
    assert metrics.amp_slow == pytest.approx(2 * a0 * (a1 + a2))
    assert metrics.amp_fast == pytest.approx(2 * a1 * a2)
    assert metrics.delta_A == pytest.approx(abs(metrics.amp_slow - metrics.amp_fast))

    t = np.linspace(0.0, 40.0, 2001)
    fit = fit_envelope(t, LongTimeAmplitude(modes).intensity(t), metrics.upsilon)
    assert fit.slow_amplitude == pytest.approx(abs(metrics.amp_slow), abs=1e-10)
    assert fit.fast_amplitude == pytest.approx(abs(metrics.amp_fast), abs=1e-10)

    with pytest.raises(WrongCase):
        envelope_metrics(classify(fig2a))


# ============================================
# Pole Residues
# ============================================

def test_bound_poles_reproduce_mode_sum(fig2a):
    poles = bound_poles(find_poles(fig2a))
    t = np.linspace(0.0, 100.0, 11)
    np.testing.assert_allclose(residue_amplitude(poles, fig2a, t),
                               multi_mode_amplitude(classify(fig2a), t), atol=1e-8)


def test_residue_amplitude_without_poles(fig2a):
    np.testing.assert_array_equal(residue_amplitude([], fig2a, [0.0, 1.0]), np.zeros(2))


def test_bound_poles_filter():
    assert bound_poles([0.0 - 1j, -0.1 - 2j, 1e-12 - 3j]) == [0.0 - 1j, 1e-12 - 3j]


# ============================================
# Fitting
# ============================================

def test_dominant_period_of_cosine():
    t = np.linspace(0.0, 40.0, 2001)
    values = 0.3 + 0.2 * np.cos(PI * t + 0.4)
    assert dominant_period(t, values) == pytest.approx(2.0, rel=1e-6)


def test_fit_envelope_recovers_amplitudes():
    t = np.linspace(0.0, 60.0, 3001)
    upsilon = 0.4 * PI
    values = 0.5 + 0.12 * np.cos(upsilon * t + 0.3) + 0.04 * np.cos(2 * upsilon * t - 1.0)
    fit = fit_envelope(t, values, upsilon)
    assert fit.offset == pytest.approx(0.5)
    assert fit.slow_amplitude == pytest.approx(0.12)
    assert fit.fast_amplitude == pytest.approx(0.04)
    assert fit.relative_rms(values.max()) < 1e-12


def test_fitting_needs_enough_samples():
    with pytest.raises(ValidationError):
        dominant_period(np.arange(4.0), np.arange(4.0))
    with pytest.raises(ValidationError):
        fit_envelope(np.arange(10.0), np.arange(9.0), 1.0)
