"""
GIANTWAVE Analytic Amplitudes
=============================
Closed-form long-time amplitudes of bound modes and the pole-residue
reconstruction of eps(t). These are the oracles the integrator is checked
against.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from giantwave.common.constants import POLE_REAL_TOL
from giantwave.common.errors import ConditionNotMet, WrongCase
from giantwave.common.logger import get_logger
from giantwave.model.config import SystemConfig
from giantwave.spectral.characteristic import residue_weight
from giantwave.spectral.classify import CaseLabel, ModeSet, ModeSource, classify

log = get_logger(__file__)


# ============================================
# Static (Single-Mode) Weights
# ============================================

def _pair_grid(n_points: int):
    points = np.arange(1, n_points + 1)
    return points[:, None], points[None, :]


def _weight_2k_pi(config: SystemConfig) -> float:
    m, n = _pair_grid(config.n_points)
    total = np.sum((m + n) - np.abs(m - n))
    return 1.0 / (1.0 + 0.5 * config.gamma_tau0 * total)


def _weight_odd_pi(config: SystemConfig) -> float:
    m, n = _pair_grid(config.n_points)
    sign = (-1.0) ** (m + n)
    total = np.sum(sign * ((m + n) - np.abs(m - n)))
    return 1.0 / (1.0 + 0.5 * config.gamma_tau0 * total)


def _weight_root_of_unity(omega_tau0: float, period: int, gamma_tau0: float) -> float:
    """2sin^2(x/2) / (2sin^2(x/2) + N'*Gamma*tau0), x = omega*tau0."""
    s2 = 2.0 * math.sin(omega_tau0 / 2.0) ** 2
    return s2 / (s2 + period * gamma_tau0)


def static_amplitude(config: SystemConfig, source: ModeSource, k: Optional[int] = None) -> complex:
    """
    Long-time weight A of the bound mode created by `source`.

    For Cond2kPi this is 1/(1 + (Gamma*tau0/2) * sum_{m,n}[(m+n) - |m-n|]).
    For the root-of-unity families pass k when more than one mode qualifies.

    Raises:
        ConditionNotMet: the config does not satisfy the condition (to TOL_COND)
    """
    if config.gamma_tau0 == 0:
        return 1.0 + 0j

    modes = [m for m in classify(config, candidates=[source]).modes if k is None or m.k == k]
    details = {"source": source.value, "k": k, "omega0_tau0_pi": config.omega0_tau0 / math.pi}
    if not modes:
        raise ConditionNotMet(f"{source.value} does not hold for this config", details=details)
    if len(modes) > 1:
        raise ConditionNotMet(f"{len(modes)} {source.value} modes qualify; choose one with k", details=details)

    mode = modes[0]
    if source == ModeSource.COND_2K_PI:
        return complex(_weight_2k_pi(config))
    if source == ModeSource.COND_ODD_PI:
        return complex(_weight_odd_pi(config))
    period = config.n_points if source == ModeSource.COND_N else config.n_points + 1
    return complex(_weight_root_of_unity(mode.omega_tau0, period, config.gamma_tau0))


# ============================================
# Multi-Mode Superposition
# ============================================

def multi_mode_amplitude(mode_set: ModeSet, t) -> np.ndarray:
    """eps(t) = sum_k A_k exp(-i*omega_k*t)."""
    t = np.asarray(t, dtype=float)
    if not mode_set.modes:
        return np.zeros(t.shape, dtype=complex)
    phases = np.exp(-1j * np.multiply.outer(t, mode_set.frequencies))
    return phases @ mode_set.weights


@dataclass(frozen=True)
class LongTimeAmplitude:
    """Bound-mode part of eps(t), the only part that survives at long times."""
    modes: ModeSet

    def evaluate(self, t) -> np.ndarray:
        return multi_mode_amplitude(self.modes, t)

    def intensity(self, t) -> np.ndarray:
        return np.abs(self.evaluate(t)) ** 2

    def intensity_expansion(self, t) -> np.ndarray:
        """|eps|^2 written as sum_k |A_k|^2 + pairwise beat cosines."""
        t = np.asarray(t, dtype=float)
        w = self.modes.weights
        omega = self.modes.frequencies
        total = np.full(t.shape, float(np.sum(np.abs(w) ** 2)))
        for j in range(len(w)):
            for k in range(j + 1, len(w)):
                total += 2.0 * np.real(w[j] * np.conj(w[k]) * np.exp(-1j * (omega[j] - omega[k]) * t))
        return total

    @property
    def bound(self) -> float:
        return float(np.sum(np.abs(self.modes.weights)))

    @property
    def plateau(self) -> float:
        """Time-averaged |eps|^2 (sum of |A_k|^2)."""
        return float(np.sum(np.abs(self.modes.weights) ** 2))


@dataclass(frozen=True)
class EnvelopeMetrics:
    amp_slow: float
    amp_fast: float
    delta_A: float
    upsilon: float


def envelope_metrics(mode_set: ModeSet) -> EnvelopeMetrics:
    """
    Beat amplitudes of a three-mode set ordered (side, center, side):

        |eps|^2 = const + 2*A0*(A1 + A2)*cos(U*t) + 2*A1*A2*cos(2*U*t)

    with U half the outer spacing.

    Raises:
        WrongCase: the set does not hold exactly three modes
    """
    if mode_set.case_label != CaseLabel.THREE_MODE:
        raise WrongCase(CaseLabel.THREE_MODE.value, mode_set.case_label.value)
    a1, a0, a2 = (float(np.real(w)) for w in mode_set.weights)
    omega = mode_set.frequencies
    amp_slow = 2.0 * a0 * (a1 + a2)
    amp_fast = 2.0 * a1 * a2
    return EnvelopeMetrics(
        amp_slow=amp_slow,
        amp_fast=amp_fast,
        delta_A=abs(amp_slow - amp_fast),
        upsilon=0.5 * float(omega[2] - omega[0]),
    )


# ============================================
# Pole-Residue Reconstruction
# ============================================

def residue_amplitude(poles: Sequence[complex], config: SystemConfig, t) -> np.ndarray:
    """eps(t) = sum_k exp(s_k t) / D'(s_k) over the supplied poles."""
    t = np.asarray(t, dtype=float)
    if len(poles) == 0:
        return np.zeros(t.shape, dtype=complex)
    s = np.asarray(poles, dtype=complex)
    weights = np.atleast_1d(residue_weight(s, config))
    return np.exp(np.multiply.outer(t, s)) @ weights


def bound_poles(poles: Sequence[complex]) -> list:
    """Poles on the imaginary axis."""
    return [p for p in poles if abs(p.real) < POLE_REAL_TOL]
