"""
GIANTWAVE Field Intensity
=========================
Real-space field emitted by a giant atom, reconstructed from its amplitude
history. In the dimensionless normalization phi~ = phi*sqrt(v/Gamma), with x
in units of x0 = v*tau0,

    phi~(x, t) = -i/sqrt(2) * sum_m [eps(t - |x - m|) - r*eps(t - (x + m))]

and eps vanishes for negative arguments. P(x, t) = |phi~|^2 is in units of
Gamma/v, so the excitation norm is |eps(t)|^2 + Gamma*tau0 * int P dx.

The mirror term carries the complex reflection amplitude r; for R < 1 this
is an extension of the atomic equation to the field and has no reference
data to compare with.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from giantwave.common.constants import DEFAULT_DX
from giantwave.common.errors import HistoryTooShort, ValidationError
from giantwave.common.logger import get_logger
from giantwave.common.utility_helpers import write_csv, write_json
from giantwave.dde.trajectory import Frame, Trajectory
from giantwave.model.config import SystemConfig

log = get_logger(__file__)

HANDLER = 'field'

SQRT_HALF = math.sqrt(0.5)


# ============================================
# Field Amplitude
# ============================================

def field_amplitude(trajectory: Trajectory, x, t, config: SystemConfig) -> np.ndarray:
    """
    phi~(x, t) for broadcastable x (units of x0) and t (units of tau0).

    Raises:
        HistoryTooShort: t beyond the trajectory horizon
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if t.size and float(np.max(t)) > trajectory.horizon + 1e-9 * max(1.0, trajectory.horizon):
        raise HistoryTooShort(t=float(np.max(t)), horizon=trajectory.horizon, function="field_amplitude")

    lab = trajectory.to_frame(Frame.LAB)
    r = config.mirror_amplitude
    total = np.zeros(np.broadcast(x, t).shape, dtype=complex)
    for m in range(1, config.n_points + 1):
        total += lab.at(t - np.abs(x - m))
        if r != 0:
            total -= r * lab.at(t - (x + m))
    return -1j * SQRT_HALF * total


def outgoing_profile(trajectory: Trajectory, s, config: SystemConfig) -> np.ndarray:
    """
    F(s) = 1/2 |sum_m [eps(s + m) - r*eps(s - m)]|^2, the intensity of the
    outgoing field beyond the last coupling point as a function of s = t - x.
    """
    lab = trajectory.to_frame(Frame.LAB)
    s = np.asarray(s, dtype=float)
    r = config.mirror_amplitude
    total = np.zeros(s.shape, dtype=complex)
    for m in range(1, config.n_points + 1):
        total += lab.at(s + m)
        if r != 0:
            total -= r * lab.at(s - m)
    return 0.5 * np.abs(total) ** 2


# ============================================
# Intensity Maps
# ============================================

@dataclass(frozen=True)
class FieldMap:
    """
    P(x, t) on a (t, x) grid with the excitation norm per time row.

    `values[i, j]` is P(x_grid[j], t_grid[i]) in units of Gamma/v.
    """
    x_grid: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray
    norm_series: np.ndarray
    atom_population: np.ndarray
    tail: np.ndarray

    def to_dataframe(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, columns=[f"{x:.17g}" for x in self.x_grid])
        frame.insert(0, "t_over_tau0", self.t_grid)
        return frame

    def metadata(self, config: Optional[SystemConfig] = None) -> dict:
        meta = {
            "x_grid_over_x0": self.x_grid,
            "t_grid_over_tau0": self.t_grid,
            "norm_series": self.norm_series,
            "atom_population": self.atom_population,
            "tail": self.tail,
            "values_unit": "Gamma/v",
        }
        if config is not None:
            meta["config"] = config.to_pi_units()
        return meta

    def export(self, csv_path: str | Path, config: Optional[SystemConfig] = None) -> Path:
        """Write the matrix CSV and a `<name>.json` sidecar with grids and norms."""
        csv_path = Path(csv_path)
        write_csv(self.to_dataframe(), csv_path)
        write_json(self.metadata(config), csv_path.with_suffix(".json"))
        return csv_path


def default_x_grid(config: SystemConfig, t_end: float, dx: float = DEFAULT_DX) -> np.ndarray:
    """Grid from the mirror to past the light cone N + t_end."""
    n_cells = int(math.ceil((config.n_points + t_end) / dx)) + 1
    return np.arange(n_cells + 1) * dx


def commensurate_t_grid(t_end: float, dx: float = DEFAULT_DX, samples: int = 100) -> np.ndarray:
    """About `samples` times in [0, t_end], each a multiple of dx so wavefronts sit on x nodes."""
    steps = np.unique(np.floor(np.linspace(0.0, t_end, samples) / dx + 1e-9))
    return steps * dx


def _check_ascending(grid: np.ndarray, name: str):
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValidationError(
            message=f"{name} must be a non-empty ascending 1-D grid",
            handler=HANDLER,
            function="intensity_map",
            field=name
        )


def _tail(trajectory: Trajectory, t_grid: np.ndarray, x_max: float, config: SystemConfig) -> np.ndarray:
    """Gamma*tau0 * int_{x_max}^inf P dx for every t, from the outgoing profile."""
    if x_max < config.n_points:
        log.warning(f"⚠️ x_max={x_max} inside the atom; tail estimate skipped")
        return np.zeros(len(t_grid))
    upper = float(t_grid[-1]) - x_max
    if upper <= -config.n_points:
        return np.zeros(len(t_grid))
    h = trajectory.step_h
    s = -config.n_points + np.arange(int(math.ceil((upper + config.n_points) / h)) + 1) * h
    s = np.minimum(s, upper)
    # midpoint cells: jumps of the outgoing profile sit on nodes, never inside a sample
    flux = outgoing_profile(trajectory, 0.5 * (s[1:] + s[:-1]), config) * np.diff(s)
    cumulative = np.concatenate(([0.0], np.cumsum(flux)))
    return config.gamma_tau0 * np.interp(t_grid - x_max, s, cumulative, left=0.0)


def intensity_map(trajectory: Trajectory, x_grid, t_grid, config: SystemConfig) -> FieldMap:
    """
    P(x, t) over the grids plus the norm |eps|^2 + Gamma*tau0 * int P dx.

    The x-integral uses the midpoint rule on the cells of x_grid, plus the
    outgoing flux that has already passed x_grid[-1].

    Raises:
        ValidationError: grids not ascending
        HistoryTooShort: t_grid beyond the trajectory horizon
    """
    x_grid = np.asarray(x_grid, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    _check_ascending(x_grid, "x_grid")
    _check_ascending(t_grid, "t_grid")

    log.info(f"Field map: {len(t_grid)} times x {len(x_grid)} positions")
    mids = 0.5 * (x_grid[1:] + x_grid[:-1])
    widths = np.diff(x_grid)

    values = np.empty((len(t_grid), len(x_grid)))
    in_field = np.zeros(len(t_grid))
    for i, t in enumerate(t_grid):
        values[i] = np.abs(field_amplitude(trajectory, x_grid, t, config)) ** 2
        if len(mids):
            in_field[i] = np.sum(np.abs(field_amplitude(trajectory, mids, t, config)) ** 2 * widths)

    atom = np.abs(trajectory.at(t_grid)) ** 2
    tail = _tail(trajectory, t_grid, float(x_grid[-1]), config)
    norm = atom + config.gamma_tau0 * in_field + tail
    return FieldMap(
        x_grid=x_grid,
        t_grid=t_grid,
        values=values,
        norm_series=norm,
        atom_population=atom,
        tail=tail,
    )
