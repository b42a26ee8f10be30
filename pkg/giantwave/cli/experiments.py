"""
GIANTWAVE Experiments
=====================
Experiment specs and the runners that turn them into artifact files.

Every run owns its output directory and finishes by writing `manifest.json`
with the config hash, preset, tool/library versions and runtime. Re-running a
spec with the same seed reproduces every CSV/JSON artifact bit for bit; only
the manifest timestamp and runtime change.
"""

import math
import time
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
import pydantic
import scipy
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, model_validator

from giantwave.analytic.amplitudes import LongTimeAmplitude, static_amplitude
from giantwave.common.constants import DEFAULT_DX, DEFAULT_STEPS_PER_TAU0, EXIT_OK, PRODUCT, VERSION
from giantwave.common.errors import GiantWaveError, ValidationError, handle_errors
from giantwave.common.logger import get_logger
from giantwave.common.utility_helpers import (
    config_hash,
    ensure_dir,
    get_iso_timestamp,
    json_dumps,
    write_csv,
    write_json,
)
from giantwave.cli.presets import PRESET_TABLE_VERSION, get_preset
from giantwave.dde.integrator import integrate, integrate_multi
from giantwave.dde.stochastic import NoiseRealization, ensemble_average, integrate_stochastic
from giantwave.field.intensity import commensurate_t_grid, intensity_map
from giantwave.model.config import MultiAtomConfig, SystemConfig
from giantwave.model.kernel import build_kernel, build_multi_kernel
from giantwave.spectral.characteristic import char_residual, residue_weight
from giantwave.spectral.classify import CaseLabel, classify
from giantwave.spectral.poles import find_poles

log = get_logger(__file__)

HANDLER = 'experiments'

SCAN_COLUMNS = ["n_points", "omega0_tau0_pi", "gamma_tau0_pi", "case_label", "modes"]


class ExperimentKind(str, Enum):
    DYNAMICS = "Dynamics"
    ENSEMBLE = "Ensemble"
    FIELD_MAP = "FieldMap"
    POLES = "Poles"
    BOUND_STATE_SCAN = "BoundStateScan"
    MULTI_ATOM = "MultiAtom"
    FIGURE_PRESET = "FigurePreset"


class GridRange(BaseModel):
    """Inclusive linear range in units of pi."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    start: float
    stop: float
    num: int = Field(default=1, ge=1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


class ExperimentSpec(BaseModel):
    """
    One reproducible experiment.

    Either `preset` or `config` (a config-file payload in pi units) supplies the
    physics, except for BoundStateScan which uses the scan ranges.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ExperimentKind
    out: Path
    preset: Optional[str] = None
    config: Optional[dict] = None
    seed: int = Field(default=0, ge=0)
    steps_per_tau0: int = DEFAULT_STEPS_PER_TAU0
    horizon_gamma_t: Optional[float] = Field(default=None, ge=0.0)
    n_traj: int = Field(default=100, ge=2)
    stride: int = Field(default=1, ge=1)
    dx: float = Field(default=DEFAULT_DX, gt=0.0)
    x_max: Optional[float] = Field(default=None, gt=0.0)
    t_samples: int = Field(default=100, ge=2)
    scan_n_points: List[int] = Field(default_factory=list)
    scan_omega0_pi: Optional[GridRange] = None
    scan_gamma_pi: Optional[GridRange] = None
    chunk_size: int = Field(default=100, ge=1)

    @model_validator(mode="after")
    def _check_source(self):
        if self.kind == ExperimentKind.BOUND_STATE_SCAN:
            if not self.scan_n_points or self.scan_omega0_pi is None or self.scan_gamma_pi is None:
                raise ValueError("BoundStateScan needs scan_n_points, scan_omega0_pi and scan_gamma_pi")
            return self
        if (self.preset is None) == (self.config is None):
            raise ValueError("exactly one of preset or config is required")
        if self.kind == ExperimentKind.FIGURE_PRESET and self.preset is None:
            raise ValueError("FigurePreset needs a preset name")
        return self

    @classmethod
    def create(cls, **values) -> "ExperimentSpec":
        try:
            return cls(**values)
        except PydanticValidationError as err:
            first = err.errors()[0]
            field = ".".join(str(p) for p in first.get("loc", ())) or None
            raise ValidationError(
                message=f"Invalid ExperimentSpec: {first.get('msg')}",
                handler=HANDLER,
                function="ExperimentSpec.create",
                field=field
            )

    # ----------------------------------------
    # Resolution
    # ----------------------------------------

    def system_config(self) -> SystemConfig:
        if self.preset is not None:
            config = get_preset(self.preset).config
            if isinstance(config, MultiAtomConfig):
                raise ValidationError(f"preset {self.preset} describes several atoms", handler=HANDLER,
                                      function="system_config", field="preset")
            return config
        return SystemConfig.from_pi_units(self.config)

    def multi_atom_config(self) -> MultiAtomConfig:
        if self.preset is not None:
            config = get_preset(self.preset).config
            if not isinstance(config, MultiAtomConfig):
                raise ValidationError(f"preset {self.preset} describes a single atom", handler=HANDLER,
                                      function="multi_atom_config", field="preset")
            return config
        return MultiAtomConfig.from_pi_units(self.config)

    def horizon(self, gamma_tau0: float) -> float:
        """Integration horizon in units of tau0."""
        gamma_t = self.horizon_gamma_t
        if gamma_t is None:
            gamma_t = get_preset(self.preset).horizon_gamma_t if self.preset else 40.0
        return gamma_t / gamma_tau0 if gamma_tau0 > 0 else gamma_t

    def payload(self) -> dict:
        """Canonical content hashed into the manifest."""
        body = self.model_dump(mode="json", exclude={"out"})
        if self.preset is not None:
            body["preset_config"] = get_preset(self.preset).config.to_pi_units()
            body["preset_table_version"] = PRESET_TABLE_VERSION
        return body


# ============================================
# Runners
# ============================================

def _trajectory_frame(trajectory, stride: int, gamma_tau0: float) -> pd.DataFrame:
    frame = trajectory.to_dataframe(stride)
    frame.insert(1, "gamma_t", frame["t_over_tau0"] * gamma_tau0)
    return frame


def _run_dynamics(spec: ExperimentSpec, out: Path) -> List[str]:
    config = spec.system_config()
    kernel = build_kernel(config)
    horizon = spec.horizon(config.gamma_tau0)
    if config.dephasing_rate > 0:
        noise = NoiseRealization.generate(spec.seed, config.dephasing_rate, 1.0 / spec.steps_per_tau0,
                                          int(round(horizon * spec.steps_per_tau0)))
        trajectory = integrate_stochastic(config, kernel, horizon, spec.steps_per_tau0, noise)
    else:
        trajectory = integrate(config, kernel, horizon, spec.steps_per_tau0)
    write_csv(_trajectory_frame(trajectory, spec.stride, config.gamma_tau0), out / "trajectory.csv")
    artifacts = ["trajectory.csv"]

    modes = classify(config)
    write_json(modes.to_dict(), out / "modes.json")
    artifacts.append("modes.json")

    comparison = {
        "case_label": modes.case_label.value,
        "analytic_plateau": LongTimeAmplitude(modes).plateau,
        "final_abs2": float(trajectory.abs2[-1]),
        "final_gamma_t": trajectory.horizon * config.gamma_tau0,
    }
    if modes.case_label == CaseLabel.ONE_MODE:
        weight = static_amplitude(config, modes.modes[0].source, modes.modes[0].k)
        comparison["static_amplitude"] = weight
        comparison["static_plateau"] = abs(weight) ** 2
    write_json(comparison, out / "plateau.json")
    artifacts.append("plateau.json")
    return artifacts


def _run_ensemble(spec: ExperimentSpec, out: Path) -> List[str]:
    config = spec.system_config()
    kernel = build_kernel(config)
    horizon = spec.horizon(config.gamma_tau0)
    result = ensemble_average(config, kernel, horizon, spec.steps_per_tau0, spec.n_traj,
                              base_seed=spec.seed, stride=spec.stride)
    frame = result.to_dataframe()
    frame.insert(1, "gamma_t", frame["t_over_tau0"] * config.gamma_tau0)
    write_csv(frame, out / "ensemble.csv")

    late = 0.75 * horizon
    mean, stderr = result.plateau_statistics(late)
    write_json({
        "n_traj": result.n_traj,
        "plateau_from_t_over_tau0": late,
        "plateau_mean": mean,
        "plateau_stderr": stderr,
    }, out / "plateau.json")
    return ["ensemble.csv", "plateau.json"]


def _run_field_map(spec: ExperimentSpec, out: Path) -> List[str]:
    config = spec.system_config()
    horizon = spec.horizon(config.gamma_tau0)
    trajectory = integrate(config, build_kernel(config), horizon, spec.steps_per_tau0)

    x_max = spec.x_max if spec.x_max is not None else 2.0 * config.n_points
    x_grid = np.arange(int(math.ceil(x_max / spec.dx)) + 1) * spec.dx
    t_grid = commensurate_t_grid(trajectory.horizon, spec.dx, spec.t_samples)
    field_map = intensity_map(trajectory, x_grid, t_grid, config)
    field_map.export(out / "field_map.csv", config)
    return ["field_map.csv", "field_map.json"]


def _run_poles(spec: ExperimentSpec, out: Path) -> List[str]:
    config = spec.system_config()
    poles = find_poles(config)
    rows = [
        {
            "re": p.real,
            "im": p.imag,
            "omega_tau0_pi": -p.imag / math.pi,
            "residual": abs(char_residual(p, config)),
            "weight": residue_weight(p, config),
        }
        for p in poles
    ]
    write_json({"poles": rows}, out / "poles.json")
    write_json(classify(config).to_dict(), out / "modes.json")
    return ["poles.json", "modes.json"]


def _run_multi_atom(spec: ExperimentSpec, out: Path) -> List[str]:
    config = spec.multi_atom_config()
    horizon = spec.horizon(config.gamma_tau0)
    trajectories = integrate_multi(config, build_multi_kernel(config), horizon, spec.steps_per_tau0)
    frame = pd.DataFrame({"t_over_tau0": trajectories[0].times[::spec.stride]})
    for q, trajectory in enumerate(trajectories, start=1):
        frame[f"abs2_q{q}"] = trajectory.abs2[::spec.stride]
    frame["abs2_total"] = frame[[f"abs2_q{q}" for q in range(1, len(trajectories) + 1)]].sum(axis=1)
    write_csv(frame, out / "multi_atom.csv")
    return ["multi_atom.csv"]


def _run_figure_preset(spec: ExperimentSpec, out: Path) -> List[str]:
    if get_preset(spec.preset).is_multi:
        return _run_multi_atom(spec, out)
    return _run_dynamics(spec, out)


RUNNERS: Dict[ExperimentKind, Callable[[ExperimentSpec, Path], List[str]]] = {
    ExperimentKind.DYNAMICS: _run_dynamics,
    ExperimentKind.ENSEMBLE: _run_ensemble,
    ExperimentKind.FIELD_MAP: _run_field_map,
    ExperimentKind.POLES: _run_poles,
    ExperimentKind.MULTI_ATOM: _run_multi_atom,
    ExperimentKind.FIGURE_PRESET: _run_figure_preset,
}


# ============================================
# Bound-State Scan
# ============================================

def _scan_rows(n_points: int, omega_values: np.ndarray, gamma_values: np.ndarray) -> List[dict]:
    rows = []
    for omega_pi in omega_values:
        for gamma_pi in gamma_values:
            config = SystemConfig.create(
                n_points=n_points, omega0_tau0=omega_pi * math.pi, gamma_tau0=gamma_pi * math.pi
            )
            modes = classify(config)
            rows.append({
                "n_points": n_points,
                "omega0_tau0_pi": float(omega_pi),
                "gamma_tau0_pi": float(gamma_pi),
                "case_label": modes.case_label.value,
                "modes": json_dumps([m.to_dict() for m in modes.modes], indent=None),
            })
    return rows


def _run_scan(spec: ExperimentSpec, out: Path) -> List[str]:
    omega_values = spec.scan_omega0_pi.values()
    gamma_values = spec.scan_gamma_pi.values()
    chunk_dir = ensure_dir(out / "scan_chunks")

    # one chunk = a slice of omega values for one N, named by the hash of its grid points;
    # finished chunks are skipped on rerun
    frames = []
    per_chunk = max(1, spec.chunk_size // len(gamma_values))
    for n_points in spec.scan_n_points:
        for index, start in enumerate(range(0, len(omega_values), per_chunk)):
            chunk_omega = omega_values[start:start + per_chunk]
            key = config_hash({"n_points": n_points, "omega0_tau0_pi": chunk_omega, "gamma_tau0_pi": gamma_values})
            path = chunk_dir / f"n{n_points:03d}_{index:05d}_{key[:12]}.csv"
            if path.exists():
                log.info(f"⏭️ Reusing {path.name}")
                frames.append(pd.read_csv(path, float_precision="round_trip"))
                continue
            rows = _scan_rows(n_points, chunk_omega, gamma_values)
            frame = pd.DataFrame(rows, columns=SCAN_COLUMNS)
            write_csv(frame, path)
            frames.append(frame)

    table = pd.concat(frames, ignore_index=True)
    write_csv(table, out / "scan.csv")
    counts = table["case_label"].value_counts().to_dict()
    log.info(f"Scan complete: {len(table)} points {counts}")
    return ["scan.csv"]


# ============================================
# Entry Points
# ============================================

def _manifest(spec: ExperimentSpec, started: float, artifacts: List[str], error: Optional[GiantWaveError]) -> dict:
    payload = spec.payload()
    return {
        "tool": PRODUCT,
        "version": VERSION,
        "kind": spec.kind.value,
        "preset": spec.preset,
        "preset_table_version": PRESET_TABLE_VERSION,
        "seed": spec.seed,
        "config_hash": config_hash(payload),
        "spec": payload,
        "artifacts": artifacts,
        "libraries": {
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "pydantic": pydantic.VERSION,
        },
        "runtime_seconds": round(time.perf_counter() - started, 3),
        "timestamp": get_iso_timestamp(),
        "status": EXIT_OK if error is None else error.status,
        **({} if error is None else error.to_dict()),
    }


def execute(spec: ExperimentSpec) -> dict:
    """
    Run a spec and write its artifacts plus manifest.json into spec.out.

    Returns:
        The manifest

    Raises:
        GiantWaveError: any failure (recorded in the manifest first when possible)
    """
    started = time.perf_counter()
    out = ensure_dir(spec.out)
    log.info("=" * 60)
    log.info(f"🧪 {spec.kind.value} {spec.preset or ''}".rstrip())
    log.info("=" * 60)

    runner = _run_scan if spec.kind == ExperimentKind.BOUND_STATE_SCAN else RUNNERS[spec.kind]
    try:
        artifacts = runner(spec, out)
    except GiantWaveError as err:
        write_json(_manifest(spec, started, [], err), out / "manifest.json")
        raise

    manifest = _manifest(spec, started, artifacts, None)
    write_json(manifest, out / "manifest.json")
    log.info(f"✅ {spec.kind.value} complete in {manifest['runtime_seconds']}s ({len(artifacts)} artifacts)")
    return manifest


@handle_errors(HANDLER)
def run(spec: ExperimentSpec) -> int:
    """Execute a spec and return the exit status."""
    execute(spec)
    return EXIT_OK


@handle_errors(HANDLER)
def scan(spec: ExperimentSpec) -> int:
    """Execute a BoundStateScan spec and return the exit status."""
    if spec.kind != ExperimentKind.BOUND_STATE_SCAN:
        raise ValidationError(f"scan needs a BoundStateScan spec, got {spec.kind.value}",
                              handler=HANDLER, function="scan", field="kind")
    execute(spec)
    return EXIT_OK
