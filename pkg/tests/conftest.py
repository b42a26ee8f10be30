import json
import math

import pytest

from giantwave.cli.presets import get_preset
from giantwave.dde.integrator import integrate
from giantwave.dde.trajectory import Frame
from giantwave.model.config import SystemConfig
from giantwave.model.kernel import build_kernel

PI = math.pi


def preset_config(name: str) -> SystemConfig:
    return get_preset(name).config


def run_to(config: SystemConfig, gamma_t: float, steps_per_tau0: int = 200, frame: Frame = Frame.LAB):
    """Integrate a config up to the given Gamma*t."""
    return integrate(config, build_kernel(config), gamma_t / config.gamma_tau0, steps_per_tau0, frame)


@pytest.fixture
def fig2a() -> SystemConfig:
    return preset_config("fig2a")


@pytest.fixture
def fig2b() -> SystemConfig:
    return preset_config("fig2b")


@pytest.fixture
def fig2c() -> SystemConfig:
    return preset_config("fig2c")


@pytest.fixture
def fig6a() -> SystemConfig:
    return preset_config("fig6a")


@pytest.fixture
def fig9a() -> SystemConfig:
    return preset_config("fig9a")


@pytest.fixture
def single_point() -> SystemConfig:
    """Small atom (N = 1) with an ideal mirror."""
    return SystemConfig(n_points=1, omega0_tau0=3.3 * PI, gamma_tau0=0.2)


@pytest.fixture
def config_file(tmp_path):
    def write(payload: dict, name: str = "config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return path
    return write
