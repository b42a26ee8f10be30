"""
GIANTWAVE Bound-State Conditions
================================
Closed-form rules for bound modes of a giant atom in front of a mirror.

A real frequency omega is a bound mode when D(-i*omega) = 0. Besides the
trivial omega = omega0 in 2*pi*Z or (2k+1)*pi*Z, this happens on the roots
of unity exp(i*omega*N') = 1, N' = N (DivN) or N+1 (DivNPlus1), where

    omega0 = 2*k*pi/N' - (N'*Gamma/2) * cot(k*pi/N')

Two or three such conditions can hold at once, which pins (omega0, Gamma).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from giantwave.common.errors import CotangentPole, Infeasible
from giantwave.common.logger import get_logger

log = get_logger(__file__)


class Variant(str, Enum):
    DIV_N = "DivN"
    DIV_N_PLUS_1 = "DivNPlus1"

    def period(self, n_points: int) -> int:
        return n_points if self == Variant.DIV_N else n_points + 1


class Parity(str, Enum):
    EVEN_2K_PI = "Even2kPi"
    ODD_PI = "OddPi"


def _cot(k: int, period: int, function: str) -> float:
    if k % period == 0:
        raise CotangentPole(k, period, function=function)
    angle = k * math.pi / period
    return math.cos(angle) / math.sin(angle)


def bound_state_frequency(n_points: int, k: int, gamma_tau0: float, variant: Variant = Variant.DIV_N) -> float:
    """
    omega0*tau0 for which omega_k = 2*k*pi/N' is a bound mode.

    Example:
        bound_state_frequency(3, 4, 0.05*pi) / pi -> 2.6234
    """
    period = variant.period(n_points)
    cot = _cot(k, period, "bound_state_frequency")
    return 2.0 * k * math.pi / period - 0.5 * period * gamma_tau0 * cot


def two_mode_parameters(n_points: int, k1: int, k2: int, variant: Variant = Variant.DIV_N) -> Tuple[float, float]:
    """
    (omega0*tau0, Gamma*tau0) at which modes k1 and k2 of the same family coexist.

    Raises:
        CotangentPole: k1 or k2 is a multiple of N'
        Infeasible: degenerate pair, or nonpositive omega0 or Gamma
    """
    period = variant.period(n_points)
    details = {"n_points": n_points, "k1": k1, "k2": k2, "variant": variant.value}
    if k1 == k2:
        raise Infeasible("k1 == k2 is not a pair", function="two_mode_parameters", details=details)

    c1 = _cot(k1, period, "two_mode_parameters")
    c2 = _cot(k2, period, "two_mode_parameters")
    if math.isclose(c1, c2, rel_tol=0.0, abs_tol=1e-14):
        raise Infeasible("k1 and k2 share a cotangent", function="two_mode_parameters", details=details)

    gamma_tau0 = 4.0 * (k1 - k2) * math.pi / (period ** 2 * (c1 - c2))
    omega0_tau0 = 2.0 * k1 * math.pi / period - 0.5 * period * gamma_tau0 * c1
    if gamma_tau0 <= 0 or omega0_tau0 <= 0:
        raise Infeasible(
            f"pair gives omega0={omega0_tau0 / math.pi:.4f}pi, Gamma={gamma_tau0 / math.pi:.4f}pi",
            function="two_mode_parameters",
            details=details
        )
    return omega0_tau0, gamma_tau0


@dataclass(frozen=True)
class ThreeModeParameters:
    omega0_tau0: float
    gamma_tau0: float
    k1: int
    k2: int
    frequencies: Tuple[float, float, float]


def three_mode_parameters(
    n_points: int,
    k0: int,
    q: int,
    parity: Parity = Parity.EVEN_2K_PI,
    variant: Variant = Variant.DIV_N,
) -> ThreeModeParameters:
    """
    Parameters where omega0 itself and two side modes of the N' family are bound.

    Even2kPi: omega0 = 2*k0*pi, k = N'k0 -/+ q,
              Gamma = (4*q*pi/N'^2) * tan(q*pi/N')
    OddPi:    omega0 = (2*k0+1)*pi, k = N'k0 - q and N'(k0+1) + q,
              Gamma = (2*pi/N'^2) * (N' + 2q) * tan(q*pi/N')

    Raises:
        Infeasible: q outside 1 <= q < N'/2, or k0 < 0
    """
    period = variant.period(n_points)
    details = {"n_points": n_points, "k0": k0, "q": q, "parity": parity.value, "variant": variant.value}
    if not 1 <= q < period / 2 or k0 < 0:
        raise Infeasible(f"q={q} must satisfy 1 <= q < {period}/2", function="three_mode_parameters",
                         details=details)
    tan = math.tan(q * math.pi / period)
    if not math.isfinite(tan) or tan <= 0:
        raise Infeasible("tan(q*pi/N') must be positive", function="three_mode_parameters", details=details)

    if parity == Parity.EVEN_2K_PI:
        omega0_tau0 = 2.0 * k0 * math.pi
        gamma_tau0 = 4.0 * q * math.pi / period ** 2 * tan
        k1, k2 = period * k0 - q, period * k0 + q
    else:
        omega0_tau0 = (2.0 * k0 + 1.0) * math.pi
        gamma_tau0 = 2.0 * math.pi / period ** 2 * (period + 2 * q) * tan
        k1, k2 = period * k0 - q, period * (k0 + 1) + q

    if k1 < 1:
        raise Infeasible(f"side mode k1={k1} is not positive", function="three_mode_parameters", details=details)

    frequencies = (2.0 * k1 * math.pi / period, omega0_tau0, 2.0 * k2 * math.pi / period)
    log.debug(f"Three-mode set N'={period}: k1={k1}, k2={k2}, Gamma={gamma_tau0 / math.pi:.4f}pi")
    return ThreeModeParameters(
        omega0_tau0=omega0_tau0,
        gamma_tau0=gamma_tau0,
        k1=k1,
        k2=k2,
        frequencies=frequencies,
    )
