"""
GIANTWAVE Trajectory
====================
Uniformly sampled atomic amplitude history with delayed (off-grid) lookup.

Samples are stored in the rotating frame u(t) = exp(i*omega0*t) * eps(t),
together with the one-sided time derivatives at every node, so lookups use
cubic Hermite interpolation of the slowly varying u and re-apply the fast
phase afterwards.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import pandas as pd

from giantwave.common.errors import HistoryTooShort
from giantwave.common.logger import get_logger

log = get_logger(__file__)

CSV_COLUMNS = ["t_over_tau0", "re_eps", "im_eps", "abs2"]


class Frame(str, Enum):
    LAB = "lab"
    ROTATING = "rotating"


@dataclass(frozen=True)
class Trajectory:
    """
    eps(t) on t = j*h, j = 0..J, h = 1/steps_per_tau0.

    `rotating` holds u_j; `slope_right[j]` / `slope_left[j]` hold du/dt just
    after / just before node j (they differ only where a delayed term switches on).
    """
    steps_per_tau0: int
    omega0_tau0: float
    rotating: np.ndarray
    slope_right: np.ndarray
    slope_left: np.ndarray
    frame: Frame = Frame.LAB

    @property
    def step_h(self) -> float:
        return 1.0 / self.steps_per_tau0

    @property
    def n_steps(self) -> int:
        return len(self.rotating) - 1

    @property
    def horizon(self) -> float:
        return self.n_steps * self.step_h

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.step_h

    def _phase(self, t: np.ndarray) -> np.ndarray:
        if self.frame == Frame.ROTATING:
            return np.ones_like(t, dtype=complex)
        return np.exp(-1j * self.omega0_tau0 * t)

    @property
    def samples(self) -> np.ndarray:
        """eps at every node in this trajectory's frame."""
        return self.rotating * self._phase(self.times)

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.rotating) ** 2

    def to_frame(self, frame: Frame) -> "Trajectory":
        return replace(self, frame=frame)

    def at(self, t) -> np.ndarray:
        """
        eps(t) at arbitrary times; zero before t = 0 (nothing emitted yet).

        Raises:
            HistoryTooShort: if any t lies beyond the stored horizon
        """
        t = np.asarray(t, dtype=float)
        t_max = float(np.max(t)) if t.size else 0.0
        if t_max > self.horizon + 1e-9 * max(1.0, self.horizon):
            raise HistoryTooShort(t=t_max, horizon=self.horizon, function="Trajectory.at")

        h = self.step_h
        J = self.n_steps
        inside = t >= 0
        tc = np.clip(t, 0.0, self.horizon)
        if J == 0:
            value = np.full(t.shape, self.rotating[0], dtype=complex)
        else:
            i = np.minimum(np.floor(tc / h).astype(np.int64), J - 1)
            theta = tc / h - i
            th2 = theta * theta
            th3 = th2 * theta
            value = (
                (2 * th3 - 3 * th2 + 1) * self.rotating[i]
                + (th3 - 2 * th2 + theta) * h * self.slope_right[i]
                + (-2 * th3 + 3 * th2) * self.rotating[i + 1]
                + (th3 - th2) * h * self.slope_left[i + 1]
            )
        return np.where(inside, value * self._phase(tc), 0j)

    def to_dataframe(self, stride: int = 1) -> pd.DataFrame:
        """Export rows with the stable CSV header."""
        eps = self.samples[::stride]
        return pd.DataFrame({
            "t_over_tau0": self.times[::stride],
            "re_eps": eps.real,
            "im_eps": eps.imag,
            "abs2": np.abs(eps) ** 2,
        }, columns=CSV_COLUMNS)
