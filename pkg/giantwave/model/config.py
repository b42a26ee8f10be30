"""
GIANTWAVE Model Configuration
=============================
Physical parameters of one giant atom (SystemConfig) or of an array of giant
atoms sharing the waveguide (MultiAtomConfig).

Times are in units of tau0 and rates are the dimensionless products with tau0,
so `gamma_tau0` is also Gamma expressed in 1/tau0. Ratios (`gamma_ext_ratio`,
`dephasing_ratio`, atom detunings) are in units of Gamma.
"""

import math
from enum import Enum
from pathlib import Path
from typing import List

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, model_validator

from giantwave.common.constants import RWA_LIMIT
from giantwave.common.errors import ValidationError
from giantwave.common.logger import get_logger
from giantwave.common.utility_helpers import load_json_file, require_fields

log = get_logger(__file__)

HANDLER = 'model'

CONFIG_FILE_KEYS = {
    'n_points', 'omega0_tau0_pi', 'gamma_tau0_pi', 'reflectivity', 'gamma_ext_ratio', 'dephasing_ratio'
}


class CouplingMode(str, Enum):
    AS_PRINTED = "as_printed"
    FULL_CROSS = "full_cross"


# ============================================
# Single Atom
# ============================================

class SystemConfig(BaseModel):
    """
    One giant atom with N coupling points in front of a mirror.

    Usage:
        config = SystemConfig(n_points=3, omega0_tau0=2 * math.pi, gamma_tau0=0.05 * math.pi)
        config.mirror_amplitude   # r = R + i*sqrt(R(1-R))
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_points: int = Field(ge=1)
    omega0_tau0: float
    gamma_tau0: float = Field(ge=0.0)
    reflectivity: float = Field(default=1.0, ge=0.0, le=1.0)
    gamma_ext_ratio: float = Field(default=0.0, ge=0.0)
    dephasing_ratio: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def _check_finite(self):
        for name in ('omega0_tau0', 'gamma_tau0', 'reflectivity', 'gamma_ext_ratio', 'dephasing_ratio'):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self

    @classmethod
    def create(cls, **values) -> "SystemConfig":
        """Build a config, converting pydantic failures into ValidationError."""
        try:
            config = cls(**values)
        except PydanticValidationError as err:
            first = err.errors()[0]
            field = ".".join(str(p) for p in first.get("loc", ())) or None
            raise ValidationError(
                message=f"Invalid SystemConfig: {first.get('msg')}",
                handler=HANDLER,
                function="SystemConfig.create",
                field=field
            )
        for k, period, ratio in rwa_violations(config):
            log.warning(
                f"⚠️ Rotating-wave validity: N*Gamma*|cot(k*pi/{period})|/(2*omega0) = {ratio:.3f} "
                f">= {RWA_LIMIT} for k={k}"
            )
        return config

    @classmethod
    def from_pi_units(cls, data: dict) -> "SystemConfig":
        """Build a config from the file schema (frequency-like keys in units of pi)."""
        require_fields(data, 'n_points', 'omega0_tau0_pi', 'gamma_tau0_pi', function="from_pi_units")
        extra = set(data) - CONFIG_FILE_KEYS
        if extra:
            raise ValidationError(
                message=f"Unexpected fields: {sorted(extra)}",
                handler=HANDLER,
                function="from_pi_units",
                field=sorted(extra)[0]
            )
        return cls.create(
            n_points=data['n_points'],
            omega0_tau0=float(data['omega0_tau0_pi']) * math.pi,
            gamma_tau0=float(data['gamma_tau0_pi']) * math.pi,
            reflectivity=data.get('reflectivity', 1.0),
            gamma_ext_ratio=data.get('gamma_ext_ratio', 0.0),
            dephasing_ratio=data.get('dephasing_ratio', 0.0),
        )

    def to_pi_units(self) -> dict:
        """Inverse of from_pi_units; this is the config file schema."""
        return {
            'n_points': self.n_points,
            'omega0_tau0_pi': self.omega0_tau0 / math.pi,
            'gamma_tau0_pi': self.gamma_tau0 / math.pi,
            'reflectivity': self.reflectivity,
            'gamma_ext_ratio': self.gamma_ext_ratio,
            'dephasing_ratio': self.dephasing_ratio,
        }

    def replace(self, **changes) -> "SystemConfig":
        """Validated copy with some fields changed."""
        return SystemConfig.create(**{**self.model_dump(), **changes})

    @property
    def mirror_amplitude(self) -> complex:
        """Reflection amplitude r = R + i*sqrt(R(1-R)), |r|^2 = R."""
        R = self.reflectivity
        return complex(R, math.sqrt(R * (1.0 - R)))

    @property
    def gamma_ext(self) -> float:
        """External loss rate in 1/tau0."""
        return self.gamma_ext_ratio * self.gamma_tau0

    @property
    def dephasing_rate(self) -> float:
        """Dephasing rate delta-omega in 1/tau0."""
        return self.dephasing_ratio * self.gamma_tau0

    @property
    def is_ideal(self) -> bool:
        return self.reflectivity == 1.0 and self.gamma_ext_ratio == 0.0 and self.dephasing_ratio == 0.0

    def gamma_time_to_tau0(self, gamma_t: float) -> float:
        """Convert a time in units of 1/Gamma to units of tau0."""
        if self.gamma_tau0 == 0:
            return gamma_t
        return gamma_t / self.gamma_tau0


def load_system_config(path: str | Path) -> SystemConfig:
    """Load a SystemConfig from a JSON config file."""
    data = load_json_file(path)
    log.info(f"Loaded config from {path}")
    return SystemConfig.from_pi_units(data)


# ============================================
# Rotating-Wave Validity
# ============================================

def rwa_ratio(n_points: int, k: int, period: int, gamma_tau0: float, omega0_tau0: float) -> float:
    """N * Gamma * |cot(k*pi/period)| / (2*omega0) for a candidate bound mode."""
    if omega0_tau0 == 0:
        return math.inf
    cot = math.cos(k * math.pi / period) / math.sin(k * math.pi / period)
    return period * gamma_tau0 * abs(cot) / (2.0 * abs(omega0_tau0))


def rwa_violations(config: SystemConfig) -> List[tuple]:
    """
    Candidate bound modes that break the rotating-wave validity limit.

    The candidates are the Markovian-nearest indices k (for both the N and the
    N+1 families). Returns (k, period, ratio) for every candidate at or above
    RWA_LIMIT.
    """
    if config.gamma_tau0 == 0:
        return []
    violations = []
    for period in (config.n_points, config.n_points + 1):
        k = round(config.omega0_tau0 * period / (2 * math.pi))
        if k < 1 or k % period == 0:
            continue
        ratio = rwa_ratio(config.n_points, k, period, config.gamma_tau0, config.omega0_tau0)
        if ratio >= RWA_LIMIT:
            violations.append((k, period, ratio))
    return violations


# ============================================
# Multiple Atoms
# ============================================

class AtomSpec(BaseModel):
    """One member of a multi-atom array."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_points: int = Field(ge=1)
    detuning_ratio: float = 0.0
    amplitude_re: float = 0.0
    amplitude_im: float = 0.0

    @property
    def amplitude(self) -> complex:
        return complex(self.amplitude_re, self.amplitude_im)


class MultiAtomConfig(BaseModel):
    """
    Q giant atoms sharing one semi-infinite waveguide.

    Atom q occupies coupling points l_q+1 .. l_q+N_q with l_q the number of
    points of all atoms before it.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    atoms: List[AtomSpec] = Field(min_length=1)
    omega0_tau0: float
    gamma_tau0: float = Field(ge=0.0)
    reflectivity: float = Field(default=1.0, ge=0.0, le=1.0)
    gamma_ext_ratio: float = Field(default=0.0, ge=0.0)
    coupling_mode: CouplingMode = CouplingMode.AS_PRINTED
    duplicate_detuning: bool = False

    @model_validator(mode="after")
    def _check_atoms(self):
        total = sum(abs(atom.amplitude) ** 2 for atom in self.atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"sum of |eps_q(0)|^2 must be 1, got {total!r}")
        if self.duplicate_detuning and self.coupling_mode != CouplingMode.AS_PRINTED:
            raise ValueError("duplicate_detuning only applies to the as-printed coupling mode")
        return self

    @classmethod
    def create(cls, **values) -> "MultiAtomConfig":
        try:
            return cls(**values)
        except PydanticValidationError as err:
            first = err.errors()[0]
            field = ".".join(str(p) for p in first.get("loc", ())) or None
            raise ValidationError(
                message=f"Invalid MultiAtomConfig: {first.get('msg')}",
                handler=HANDLER,
                function="MultiAtomConfig.create",
                field=field
            )

    @classmethod
    def from_pi_units(cls, data: dict) -> "MultiAtomConfig":
        require_fields(data, 'atoms', 'omega0_tau0_pi', 'gamma_tau0_pi', function="MultiAtomConfig.from_pi_units")
        values = dict(data)
        values['omega0_tau0'] = float(values.pop('omega0_tau0_pi')) * math.pi
        values['gamma_tau0'] = float(values.pop('gamma_tau0_pi')) * math.pi
        return cls.create(**values)

    def to_pi_units(self) -> dict:
        payload = self.model_dump(mode="json", exclude={'omega0_tau0', 'gamma_tau0'})
        payload['omega0_tau0_pi'] = self.omega0_tau0 / math.pi
        payload['gamma_tau0_pi'] = self.gamma_tau0 / math.pi
        return payload

    @property
    def offsets(self) -> List[int]:
        """l_q for every atom."""
        offsets, total = [], 0
        for atom in self.atoms:
            offsets.append(total)
            total += atom.n_points
        return offsets

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def mirror_amplitude(self) -> complex:
        R = self.reflectivity
        return complex(R, math.sqrt(R * (1.0 - R)))

    @property
    def gamma_ext(self) -> float:
        return self.gamma_ext_ratio * self.gamma_tau0

    def as_system_config(self) -> SystemConfig:
        """Single-atom config of a one-atom array."""
        return self.atom_config(0)

    def atom_config(self, q: int) -> SystemConfig:
        """Single-atom view of atom q (its own frequency and coupling points)."""
        atom = self.atoms[q]
        return SystemConfig.create(
            n_points=atom.n_points,
            omega0_tau0=self.omega0_tau0 + atom.detuning_ratio * self.gamma_tau0,
            gamma_tau0=self.gamma_tau0,
            reflectivity=self.reflectivity,
            gamma_ext_ratio=self.gamma_ext_ratio,
        )


def load_multi_atom_config(path: str | Path) -> MultiAtomConfig:
    """Load a MultiAtomConfig from a JSON config file."""
    data = load_json_file(path)
    log.info(f"Loaded multi-atom config from {path}")
    return MultiAtomConfig.from_pi_units(data)
