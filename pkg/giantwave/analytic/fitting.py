"""
GIANTWAVE Beat Fitting
======================
Period and envelope estimates for oscillating |eps(t)|^2 series.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from giantwave.common.errors import ValidationError
from giantwave.common.logger import get_logger

log = get_logger(__file__)

HANDLER = 'analytic'


def _check_series(times: np.ndarray, values: np.ndarray, function: str):
    if times.shape != values.shape or times.size < 8:
        raise ValidationError(
            message="need matching time/value arrays with at least 8 samples",
            handler=HANDLER,
            function=function,
            field="times"
        )


def _cosine(t, amplitude, period, phase, offset):
    return amplitude * np.cos(2.0 * np.pi * t / period + phase) + offset


def dominant_period(times, values) -> float:
    """
    Period of the strongest oscillation in a uniformly sampled series.

    The FFT peak gives a first guess that a single-cosine fit refines.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    _check_series(times, values, "dominant_period")

    dt = times[1] - times[0]
    centered = values - values.mean()
    spectrum = np.abs(np.fft.rfft(centered * np.hanning(len(centered))))
    freqs = np.fft.rfftfreq(len(centered), dt)
    peak = int(np.argmax(spectrum[1:])) + 1
    guess = 1.0 / freqs[peak]

    amplitude = 0.5 * (values.max() - values.min())
    phase = np.angle(np.sum(centered * np.exp(-2j * np.pi * times / guess)))
    try:
        popt, _ = curve_fit(
            _cosine,
            times,
            values,
            p0=[amplitude, guess, phase, values.mean()],
            maxfev=10000,
        )
        period = abs(float(popt[1]))
    except RuntimeError as err:
        log.warning(f"⚠️ Cosine refinement failed, keeping FFT period: {err}")
        period = guess
    return period


@dataclass(frozen=True)
class EnvelopeFit:
    offset: float
    slow_amplitude: float
    fast_amplitude: float
    rms_residual: float

    def relative_rms(self, peak: float) -> float:
        return self.rms_residual / peak if peak else float("inf")


def fit_envelope(times, values, upsilon: float) -> EnvelopeFit:
    """
    Least-squares fit of c + a1*cos(U t + p1) + a2*cos(2U t + p2).

    Returns the cosine amplitudes and the RMS residual of the fit.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    _check_series(times, values, "fit_envelope")

    basis = np.column_stack([
        np.ones_like(times),
        np.cos(upsilon * times), np.sin(upsilon * times),
        np.cos(2 * upsilon * times), np.sin(2 * upsilon * times),
    ])
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    residual = values - basis @ coef
    return EnvelopeFit(
        offset=float(coef[0]),
        slow_amplitude=float(np.hypot(coef[1], coef[2])),
        fast_amplitude=float(np.hypot(coef[3], coef[4])),
        rms_residual=float(np.sqrt(np.mean(residual ** 2))),
    )
