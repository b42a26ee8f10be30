"""
GIANTWAVE Pole Search
=====================
Zeros of the characteristic function inside a rectangle of the complex plane,
found by vectorized Newton iterations seeded on a regular grid.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from giantwave.common.constants import (
    NEWTON_MAX_ITER,
    POLE_DEDUP_DISTANCE,
    POLE_RESIDUAL_TOL,
    SEARCH_DEPTH_GAMMA,
    SEARCH_GRID,
    SEARCH_HALF_WIDTH,
)
from giantwave.common.errors import ValidationError
from giantwave.common.logger import get_logger
from giantwave.model.config import SystemConfig
from giantwave.spectral.characteristic import char_derivative, char_residual

log = get_logger(__file__)

HANDLER = 'spectral'

# Upper bound on Re(s) for a search box (physical poles have Re(s) <= 0)
MAX_BOX_REAL = 1e-3


@dataclass(frozen=True)
class SearchBox:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def contains(self, s: np.ndarray, slack: float = 0.0) -> np.ndarray:
        return (
            (s.real >= self.re_min - slack) & (s.real <= self.re_max + slack)
            & (s.imag >= self.im_min - slack) & (s.imag <= self.im_max + slack)
        )


def default_search_box(config: SystemConfig) -> SearchBox:
    """Re in [-3*Gamma, 1e-6], Im within 6*pi of -omega0."""
    return SearchBox(
        re_min=-SEARCH_DEPTH_GAMMA * config.gamma_tau0 - 0.5 * config.n_points * config.gamma_ext,
        re_max=1e-6,
        im_min=-config.omega0_tau0 - SEARCH_HALF_WIDTH,
        im_max=-config.omega0_tau0 + SEARCH_HALF_WIDTH,
    )


def _newton(seeds: np.ndarray, config: SystemConfig, box: SearchBox) -> np.ndarray:
    """Run Newton from every seed; returns final iterates (NaN where a seed escaped)."""
    s = seeds.astype(complex)
    # seeds may wander a little outside the box before settling
    escape = 0.5 * max(box.re_max - box.re_min, box.im_max - box.im_min)
    active = np.ones(len(s), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(NEWTON_MAX_ITER):
            if not np.any(active):
                break
            idx = np.flatnonzero(active)
            current = s[idx]
            D = char_residual(current, config)
            step = D / char_derivative(current, config)
            nxt = current - step
            bad = ~np.isfinite(nxt) | ~box.contains(nxt, slack=escape)
            nxt[bad] = np.nan
            s[idx] = nxt
            done = bad | (np.abs(step) < 1e-15 * np.maximum(1.0, np.abs(nxt)))
            active[idx[done]] = False
    return s


def _dedup(poles: np.ndarray) -> List[complex]:
    kept: List[complex] = []
    for p in poles:
        if all(abs(p - q) >= POLE_DEDUP_DISTANCE for q in kept):
            kept.append(complex(p))
    return kept


def find_poles(
    config: SystemConfig,
    search_box: Optional[SearchBox] = None,
    grid_density: int = SEARCH_GRID,
) -> List[complex]:
    """
    All zeros of D(s) reachable from a grid_density x grid_density seed grid.

    Returns:
        Poles with |D| < 1e-10, deduplicated, sorted by Re descending then Im

    Raises:
        ValidationError: box is empty or reaches into Re(s) > 1e-3
    """
    box = search_box or default_search_box(config)
    if box.re_max > MAX_BOX_REAL or box.re_min > box.re_max or box.im_min > box.im_max or grid_density < 1:
        raise ValidationError(
            message=f"invalid search box {box}",
            handler=HANDLER,
            function="find_poles",
            field="search_box"
        )

    # without coupling the only pole is the bare transition
    if config.gamma_tau0 == 0:
        return [complex(-0.5 * config.n_points * config.gamma_ext, -config.omega0_tau0)]

    re = np.linspace(box.re_min, box.re_max, grid_density)
    im = np.linspace(box.im_min, box.im_max, grid_density)
    seeds = (re[None, :] + 1j * im[:, None]).ravel()

    final = _newton(seeds, config, box)
    finite = np.isfinite(final)
    with np.errstate(all="ignore"):
        residual = np.full(len(final), np.inf)
        residual[finite] = np.abs(char_residual(final[finite], config))
    converged = finite & (residual < POLE_RESIDUAL_TOL) & box.contains(final, slack=POLE_DEDUP_DISTANCE)

    dropped = int(np.count_nonzero(~converged))
    log.debug(f"{dropped} of {len(seeds)} seeds dropped")
    if dropped == len(seeds):
        log.warning(f"No seed converged inside {box}; returning no poles")
        return []

    candidates = final[converged]
    order = np.lexsort((candidates.imag, -candidates.real))
    poles = _dedup(candidates[order])
    poles.sort(key=lambda p: (-p.real, p.imag))
    log.info(f"Found {len(poles)} poles for N={config.n_points} in box {box}")
    return poles
