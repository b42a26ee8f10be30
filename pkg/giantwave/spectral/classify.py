"""
GIANTWAVE Mode Classification
=============================
Finds every bound (purely imaginary) pole of a configuration from the closed
bound-state conditions and labels the long-time behaviour.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Tuple

import numpy as np

from giantwave.common.constants import MODE_RESIDUAL_TOL, SCAN_MARGIN, TOL_COND
from giantwave.common.logger import get_logger
from giantwave.common.utility_helpers import json_dumps
from giantwave.model.config import SystemConfig
from giantwave.spectral.characteristic import char_residual, residue_weight
from giantwave.spectral.conditions import Variant, bound_state_frequency

log = get_logger(__file__)


class ModeSource(str, Enum):
    COND_2K_PI = "Cond2kPi"
    COND_ODD_PI = "CondOddPi"
    COND_N = "CondN"
    COND_N_PLUS_1 = "CondNPlus1"


class CaseLabel(str, Enum):
    DECAYING = "Decaying"
    ONE_MODE = "OneMode"
    TWO_MODE = "TwoMode"
    THREE_MODE = "ThreeMode"
    MULTI_MODE = "MultiMode"


# Coinciding modes keep the first source in this order
SOURCE_PRIORITY = [ModeSource.COND_2K_PI, ModeSource.COND_ODD_PI, ModeSource.COND_N, ModeSource.COND_N_PLUS_1]

COINCIDENCE_TOL = 1e-9


@dataclass(frozen=True)
class Mode:
    omega_tau0: float
    weight: complex
    source: ModeSource
    k: int

    def to_dict(self) -> dict:
        return {
            "omega_tau0_pi": self.omega_tau0 / math.pi,
            "weight": self.weight,
            "source": self.source.value,
            "k": self.k,
        }


@dataclass(frozen=True)
class ModeSet:
    modes: Tuple[Mode, ...] = field(default_factory=tuple)

    @property
    def case_label(self) -> CaseLabel:
        labels = [CaseLabel.DECAYING, CaseLabel.ONE_MODE, CaseLabel.TWO_MODE, CaseLabel.THREE_MODE]
        return labels[len(self.modes)] if len(self.modes) < len(labels) else CaseLabel.MULTI_MODE

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([m.omega_tau0 for m in self.modes])

    @property
    def weights(self) -> np.ndarray:
        return np.array([m.weight for m in self.modes], dtype=complex)

    @property
    def sources(self) -> List[ModeSource]:
        return [m.source for m in self.modes]

    def to_dict(self) -> dict:
        return {"case_label": self.case_label.value, "modes": [m.to_dict() for m in self.modes]}

    def to_json(self) -> str:
        return json_dumps(self.to_dict())


# ============================================
# Candidate Scan
# ============================================

def scan_window(omega0_tau0: float, period: int) -> range:
    """Indices k whose Markovian frequency 2*k*pi/period lies within 4*pi of omega0."""
    lo = max(1, math.floor((omega0_tau0 - SCAN_MARGIN) * period / (2 * math.pi)))
    hi = math.ceil((omega0_tau0 + SCAN_MARGIN) * period / (2 * math.pi))
    return range(lo, hi + 1)


def _matches(omega0_tau0: float, target: float) -> bool:
    return abs(omega0_tau0 - target) / math.pi < TOL_COND


def _candidates(config: SystemConfig, sources: Iterable[ModeSource]) -> List[Tuple[float, ModeSource, int]]:
    omega0 = config.omega0_tau0
    found = []
    sources = set(sources)

    if ModeSource.COND_2K_PI in sources:
        k = round(omega0 / (2 * math.pi))
        if k >= 1 and _matches(omega0, 2 * k * math.pi):
            found.append((2 * k * math.pi, ModeSource.COND_2K_PI, k))
    if ModeSource.COND_ODD_PI in sources:
        k = round((omega0 / math.pi - 1) / 2)
        if k >= 0 and _matches(omega0, (2 * k + 1) * math.pi):
            found.append(((2 * k + 1) * math.pi, ModeSource.COND_ODD_PI, k))

    for source, variant in ((ModeSource.COND_N, Variant.DIV_N), (ModeSource.COND_N_PLUS_1, Variant.DIV_N_PLUS_1)):
        if source not in sources:
            continue
        period = variant.period(config.n_points)
        for k in scan_window(omega0, period):
            if k % period == 0:
                continue
            if _matches(omega0, bound_state_frequency(config.n_points, k, config.gamma_tau0, variant)):
                found.append((2 * k * math.pi / period, source, k))
    return found


def classify(config: SystemConfig, candidates: Optional[Iterable[ModeSource]] = None) -> ModeSet:
    """
    Bound modes of a configuration with their residue weights.

    Every condition that holds to TOL_COND (in units of pi) contributes a mode;
    modes whose frequency coincides are merged, and modes with a lossy real part
    (mirror leakage or external loss) are discarded.

    Example:
        classify(fig2a) -> OneMode [Cond2kPi at 2*pi]
    """
    sources = list(candidates) if candidates is not None else SOURCE_PRIORITY
    found = sorted(_candidates(config, sources), key=lambda c: SOURCE_PRIORITY.index(c[1]))

    modes: List[Mode] = []
    for omega, source, k in found:
        if any(abs(omega - m.omega_tau0) < COINCIDENCE_TOL for m in modes):
            continue
        s = -1j * omega
        if abs(char_residual(s, config).real) >= MODE_RESIDUAL_TOL:
            log.debug(f"Dropping {source.value} k={k}: pole is not on the imaginary axis")
            continue
        modes.append(Mode(omega_tau0=omega, weight=complex(residue_weight(s, config)), source=source, k=k))

    modes.sort(key=lambda m: m.omega_tau0)
    mode_set = ModeSet(modes=tuple(modes))
    log.debug(f"Classified N={config.n_points}, omega0={config.omega0_tau0 / math.pi:.4f}pi -> "
              f"{mode_set.case_label.value}")
    return mode_set
