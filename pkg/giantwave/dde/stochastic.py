"""
GIANTWAVE Stochastic Dephasing
==============================
White-noise frequency fluctuations <lambda(t)lambda(t')> = 2*dw*delta(t - t').

Each step of the deterministic stepper is followed by the exact phase kick
exp(-i*dW_j), dW_j ~ Normal(0, 2*dw*h). Ensembles run many realizations as
channels of one batched march; chunks of trajectories run concurrently.
"""

import asyncio
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from giantwave.common.constants import DEFAULT_STEPS_PER_TAU0, ENSEMBLE_CHUNK, WORKERS
from giantwave.common.errors import NumericError, ValidationError
from giantwave.common.logger import get_logger
from giantwave.dde.integrator import check_grid, integrate, local_rate, march, rotating_couplings
from giantwave.dde.trajectory import Frame, Trajectory
from giantwave.model.config import SystemConfig
from giantwave.model.kernel import DelayKernel

log = get_logger(__file__)

HANDLER = 'dde'

ENSEMBLE_COLUMNS = ["t_over_tau0", "mean_abs2", "stderr"]


# ============================================
# Noise
# ============================================

@dataclass(frozen=True)
class NoiseRealization:
    seed: int
    increments: np.ndarray

    @classmethod
    def generate(cls, seed: int, dephasing_rate: float, step_h: float, n_steps: int) -> "NoiseRealization":
        """Draw n_steps phase kicks with variance 2*dephasing_rate*step_h."""
        if dephasing_rate < 0:
            raise ValidationError(
                message=f"dephasing_rate={dephasing_rate} must be >= 0",
                handler=HANDLER,
                function="NoiseRealization.generate",
                field="dephasing_rate"
            )
        rng = np.random.default_rng(seed)
        if dephasing_rate == 0:
            return cls(seed=seed, increments=np.zeros(n_steps))
        sigma = math.sqrt(2.0 * dephasing_rate * step_h)
        return cls(seed=seed, increments=rng.normal(0.0, sigma, n_steps))

    @property
    def n_steps(self) -> int:
        return len(self.increments)

    @property
    def phases(self) -> np.ndarray:
        """Accumulated phase at every node, starting from 0."""
        return np.concatenate(([0.0], np.cumsum(self.increments)))

    def mean(self) -> float:
        return float(np.mean(self.increments)) if self.n_steps else 0.0

    def normalized_variance(self, dephasing_rate: float, step_h: float) -> float:
        """Sample variance divided by 2*dephasing_rate*step_h (tends to 1)."""
        return float(np.var(self.increments, ddof=1) / (2.0 * dephasing_rate * step_h))


# ============================================
# Single Realization
# ============================================

def integrate_stochastic(
    config: SystemConfig,
    kernel: DelayKernel,
    horizon: float,
    steps_per_tau0: int = DEFAULT_STEPS_PER_TAU0,
    noise: Optional[NoiseRealization] = None,
    frame: Frame = Frame.LAB,
) -> Trajectory:
    """
    One dephasing trajectory. Without noise (or with all-zero kicks) this is
    exactly `integrate`.

    Raises:
        StepTooCoarse, HorizonNegative: as integrate
        ValidationError: the realization has the wrong number of steps
    """
    n_steps = check_grid(horizon, steps_per_tau0, function="integrate_stochastic")
    if noise is None or not np.any(noise.increments):
        return integrate(config, kernel, horizon, steps_per_tau0, frame)
    if noise.n_steps != n_steps:
        raise ValidationError(
            message=f"noise has {noise.n_steps} increments, grid needs {n_steps}",
            handler=HANDLER,
            function="integrate_stochastic",
            field="noise"
        )

    u, right, left = march(
        np.array([local_rate(config, kernel)]),
        rotating_couplings(kernel, config.omega0_tau0),
        np.array([1.0 + 0j]),
        steps_per_tau0,
        n_steps,
        phases=noise.phases[None, :],
    )
    return Trajectory(
        steps_per_tau0=steps_per_tau0,
        omega0_tau0=config.omega0_tau0,
        rotating=u[0],
        slope_right=right[0],
        slope_left=left[0],
        frame=frame,
    )


# ============================================
# Ensembles
# ============================================

@dataclass(frozen=True)
class EnsembleResult:
    """
    Ensemble of |eps(t)|^2 series on a strided time grid.

    `samples` keeps every trajectory (n_traj, len(times)) so late-time
    statistics can be recomputed without re-running.
    """
    times: np.ndarray
    samples: np.ndarray
    seeds: Tuple[int, ...]

    @property
    def n_traj(self) -> int:
        return self.samples.shape[0]

    @property
    def mean_abs2(self) -> np.ndarray:
        return self.samples.mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        if self.n_traj < 2:
            return np.zeros(len(self.times))
        return self.samples.std(axis=0, ddof=1) / math.sqrt(self.n_traj)

    def plateau_statistics(self, t_from: float, t_to: Optional[float] = None) -> Tuple[float, float]:
        """Mean and standard error of the per-trajectory average over [t_from, t_to]."""
        t_to = self.times[-1] if t_to is None else t_to
        window = (self.times >= t_from) & (self.times <= t_to)
        if not np.any(window):
            raise ValidationError(
                message=f"no samples in [{t_from}, {t_to}]",
                handler=HANDLER,
                function="plateau_statistics",
                field="t_from"
            )
        per_traj = self.samples[:, window].mean(axis=1)
        se = float(per_traj.std(ddof=1) / math.sqrt(len(per_traj))) if len(per_traj) > 1 else 0.0
        return float(per_traj.mean()), se

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t_over_tau0": self.times,
            "mean_abs2": self.mean_abs2,
            "stderr": self.stderr,
        }, columns=ENSEMBLE_COLUMNS)


def _run_chunk(
    config: SystemConfig,
    kernel: DelayKernel,
    seeds: Sequence[int],
    steps_per_tau0: int,
    n_steps: int,
    stride: int,
) -> np.ndarray:
    """Integrate one batch of realizations as parallel channels; returns strided |eps|^2."""
    h = 1.0 / steps_per_tau0
    phases = np.stack([
        NoiseRealization.generate(seed, config.dephasing_rate, h, n_steps).phases for seed in seeds
    ])
    C = len(seeds)
    u, _, _ = march(
        np.full(C, local_rate(config, kernel)),
        rotating_couplings(kernel, config.omega0_tau0),
        np.ones(C, dtype=complex),
        steps_per_tau0,
        n_steps,
        phases=phases,
    )
    return np.abs(u[:, ::stride]) ** 2


async def _run_ensemble(
    config: SystemConfig,
    kernel: DelayKernel,
    seeds: List[int],
    steps_per_tau0: int,
    n_steps: int,
    stride: int,
    chunk: int,
) -> Tuple[List[np.ndarray], List[int], List[dict]]:
    semaphore = asyncio.Semaphore(WORKERS)
    batches = [seeds[i:i + chunk] for i in range(0, len(seeds), chunk)]

    async def run_batch(batch: List[int]) -> np.ndarray:
        async with semaphore:
            return await asyncio.to_thread(_run_chunk, config, kernel, batch, steps_per_tau0, n_steps, stride)

    results = await asyncio.gather(*(run_batch(b) for b in batches), return_exceptions=True)

    successes, kept_seeds, failures = [], [], []
    for batch, result in zip(batches, results):
        if isinstance(result, Exception):
            log.error(f"❌ Seeds {batch[0]}..{batch[-1]}: {result}")
            failures.append({"seeds": [batch[0], batch[-1]], "error": str(result)})
        else:
            log.debug(f"✅ Seeds {batch[0]}..{batch[-1]}")
            successes.append(result)
            kept_seeds.extend(batch)
    return successes, kept_seeds, failures


def ensemble_average(
    config: SystemConfig,
    kernel: DelayKernel,
    horizon: float,
    steps_per_tau0: int = DEFAULT_STEPS_PER_TAU0,
    n_traj: int = 100,
    base_seed: int = 0,
    stride: int = 1,
    chunk: int = ENSEMBLE_CHUNK,
) -> EnsembleResult:
    """
    Mean |eps(t)|^2 over n_traj realizations seeded base_seed .. base_seed + n_traj - 1.

    Raises:
        ValidationError: n_traj < 2 or stride < 1
        NumericError: any chunk of realizations failed
    """
    n_steps = check_grid(horizon, steps_per_tau0, function="ensemble_average")
    if n_traj < 2:
        raise ValidationError(
            message=f"n_traj={n_traj} must be >= 2",
            handler=HANDLER,
            function="ensemble_average",
            field="n_traj"
        )
    if stride < 1 or chunk < 1:
        raise ValidationError(
            message="stride and chunk must be >= 1",
            handler=HANDLER,
            function="ensemble_average",
            field="stride"
        )

    seeds = list(range(base_seed, base_seed + n_traj))
    times = (np.arange(n_steps + 1) * (1.0 / steps_per_tau0))[::stride]

    if config.dephasing_rate == 0:
        abs2 = integrate(config, kernel, horizon, steps_per_tau0).abs2[::stride]
        return EnsembleResult(times=times, samples=np.tile(abs2, (n_traj, 1)), seeds=tuple(seeds))

    log.info("=" * 60)
    log.info(f"🎲 ENSEMBLE: {n_traj} trajectories, dw={config.dephasing_ratio}*Gamma, chunk={chunk}")
    log.info("=" * 60)

    successes, kept_seeds, failures = asyncio.run(
        _run_ensemble(config, kernel, seeds, steps_per_tau0, n_steps, stride, chunk)
    )

    log.info(f"🎲 ENSEMBLE COMPLETE")
    log.info(f"   ✅ Success: {len(kept_seeds)}")
    log.info(f"   ❌ Failed: {n_traj - len(kept_seeds)}")

    # no partial means
    if failures:
        raise NumericError(
            message=f"{len(failures)} ensemble chunk(s) failed",
            handler=HANDLER,
            function="ensemble_average",
            details={"failures": failures}
        )

    return EnsembleResult(times=times, samples=np.concatenate(successes, axis=0), seeds=tuple(kept_seeds))
