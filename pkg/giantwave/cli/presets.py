"""
GIANTWAVE Figure Presets
========================
Versioned table of published parameter sets, each tagged with the caption
text it comes from. Presets whose bound modes follow from a closed rule are
built with the synthesis functions, so their modes are exact rather than the
rounded caption values.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Union

from giantwave.common.errors import ValidationError
from giantwave.common.logger import get_logger
from giantwave.model.config import AtomSpec, MultiAtomConfig, SystemConfig
from giantwave.spectral.conditions import (
    Parity,
    Variant,
    bound_state_frequency,
    three_mode_parameters,
    two_mode_parameters,
)

log = get_logger(__file__)

PRESET_TABLE_VERSION = "3"

PI = math.pi


@dataclass(frozen=True)
class Preset:
    name: str
    caption: str
    config: Union[SystemConfig, MultiAtomConfig]
    horizon_gamma_t: float = 40.0
    notes: Optional[str] = None

    @property
    def is_multi(self) -> bool:
        return isinstance(self.config, MultiAtomConfig)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "caption": self.caption,
            "config": self.config.to_pi_units(),
            "horizon_gamma_t": self.horizon_gamma_t,
            "notes": self.notes,
        }


# ============================================
# Builders
# ============================================

def _single(n_points: int, omega0_tau0: float, gamma_tau0: float, **extra) -> SystemConfig:
    return SystemConfig(n_points=n_points, omega0_tau0=omega0_tau0, gamma_tau0=gamma_tau0, **extra)


def _static_2k_pi(n_points: int, k: int, gamma_pi: float) -> SystemConfig:
    return _single(n_points, 2 * k * PI, gamma_pi * PI)


def _static_bound(n_points: int, k: int, gamma_pi: float, variant: Variant) -> SystemConfig:
    return _single(n_points, bound_state_frequency(n_points, k, gamma_pi * PI, variant), gamma_pi * PI)


def _two_mode(n_points: int, k1: int, k2: int, variant: Variant) -> SystemConfig:
    omega0, gamma = two_mode_parameters(n_points, k1, k2, variant)
    return _single(n_points, omega0, gamma)


def _three_mode(n_points: int, k0: int, q: int, parity: Parity, variant: Variant) -> SystemConfig:
    params = three_mode_parameters(n_points, k0, q, parity, variant)
    return _single(n_points, params.omega0_tau0, params.gamma_tau0)


def _degraded(config: SystemConfig, **changes) -> SystemConfig:
    return config.model_copy(update=changes)


def _build_table() -> Dict[str, Preset]:
    table: Dict[str, Preset] = {}

    def add(name: str, caption: str, config, horizon_gamma_t: float = 40.0, notes: str = None):
        table[name] = Preset(name=name, caption=caption, config=config,
                             horizon_gamma_t=horizon_gamma_t, notes=notes)

    # Static bound states, N = 3
    add("fig2a", "k = 1, omega0*tau0 = 2pi, Gamma*tau0 = 0.05pi", _static_2k_pi(3, 1, 0.05), 50.0)
    add("fig2b", "k = 1, omega0*tau0 = 3pi, Gamma*tau0 = 0.05pi", _single(3, 3 * PI, 0.05 * PI), 50.0)
    add("fig2c", "k = 4, omega0*tau0 = 2.6234pi, Gamma*tau0 = 0.05pi",
        _static_bound(3, 4, 0.05, Variant.DIV_N), 50.0)
    add("fig2d", "k = 3, omega0*tau0 = 1.6pi, Gamma*tau0 = 0.05pi",
        _static_bound(3, 3, 0.05, Variant.DIV_N_PLUS_1), 50.0)

    # Static bound states versus N (N = 3 curve; the caption overlays N = 2, 3, 4)
    for suffix, k, gamma_pi in (("a", 1, 0.04), ("b", 1, 0.08), ("c", 5, 0.1), ("d", 7, 0.1)):
        add(f"fig5{suffix}", f"N = 2, 3, 4; k = {k}, Gamma*tau0 = {gamma_pi}pi",
            _static_2k_pi(3, k, gamma_pi), 40.0, notes="omega0*tau0 = 2k*pi; vary n_points for the other curves")

    # Equal-amplitude oscillating bound states
    add("fig6a", "N = 6, k1 = 23, k2 = 26, omega0*tau0 = 8.4167pi, Gamma*tau0 = 0.1443pi",
        _two_mode(6, 23, 26, Variant.DIV_N))
    add("fig6b", "N = 6, k1 = 27, k2 = 30, omega0*tau0 = 8.3336pi, Gamma*tau0 = 0.0852pi",
        _two_mode(6, 27, 30, Variant.DIV_N_PLUS_1))
    add("fig8a", "N = 7, k1 = 27, k2 = 30, omega0*tau0 = 8.3336pi, Gamma*tau0 = 0.0852pi",
        _two_mode(7, 27, 30, Variant.DIV_N))
    add("fig8b", "N = 8, k1 = 31, k2 = 34, omega0*tau0 = 8.2803pi, Gamma*tau0 = 0.0549pi",
        _two_mode(8, 31, 34, Variant.DIV_N))
    add("fig8c", "N = 7, k1 = 31, k2 = 34, omega0*tau0 = 8.2803pi, Gamma*tau0 = 0.0549pi",
        _two_mode(7, 31, 34, Variant.DIV_N_PLUS_1))
    add("fig8d", "N = 8, k1 = 35, k2 = 38, omega0*tau0 = 8.2428pi, Gamma*tau0 = 0.0376pi",
        _two_mode(8, 35, 38, Variant.DIV_N_PLUS_1))

    # Non-equal-amplitude oscillating bound states
    add("fig9a", "N = 5, k0 = 4, k1 = 19, k2 = 21, omega0*tau0 = 8pi, Gamma*tau0 = 0.1162pi",
        _three_mode(5, 4, 1, Parity.EVEN_2K_PI, Variant.DIV_N))
    add("fig9b", "N = 8, k0 = 8, k1 = 63, k2 = 73, omega0*tau0 = 17pi, Gamma*tau0 = 0.1294pi",
        _three_mode(8, 8, 1, Parity.ODD_PI, Variant.DIV_N))
    add("fig12a", "N = 6, k0 = 4, k1 = 23, k2 = 25, omega0*tau0 = 8pi, Gamma*tau0 = 0.0642pi",
        _three_mode(6, 4, 1, Parity.EVEN_2K_PI, Variant.DIV_N))
    add("fig12b", "N = 7, k0 = 4, k1 = 27, k2 = 29, omega0*tau0 = 8pi, Gamma*tau0 = 0.0393pi",
        _three_mode(7, 4, 1, Parity.EVEN_2K_PI, Variant.DIV_N))
    add("fig12c", "N = 9, k0 = 8, k1 = 71, k2 = 82, omega0*tau0 = 17pi, Gamma*tau0 = 0.0989pi",
        _three_mode(9, 8, 1, Parity.ODD_PI, Variant.DIV_N))
    add("fig12d", "N = 10, k0 = 8, k1 = 79, k2 = 91, omega0*tau0 = 17pi, Gamma*tau0 = 0.078pi",
        _three_mode(10, 8, 1, Parity.ODD_PI, Variant.DIV_N))
    add("fig16a", "N = 5, k0 = 4, k1 = 23, k2 = 25, omega0*tau0 = 8pi, Gamma*tau0 = 0.0642pi",
        _three_mode(5, 4, 1, Parity.EVEN_2K_PI, Variant.DIV_N_PLUS_1))
    add("fig16b", "N = 8, k0 = 8, k1 = 71, k2 = 82, omega0*tau0 = 17pi, Gamma*tau0 = 0.0989pi",
        _three_mode(8, 8, 1, Parity.ODD_PI, Variant.DIV_N_PLUS_1))

    # Imperfect mirror (general case R = 0.9)
    for suffix, base in zip("abcdefgh", ("fig2a", "fig2b", "fig2c", "fig2d", "fig6a", "fig6b", "fig9a", "fig9b")):
        add(f"fig10{suffix}", f"R = 0.9 with the parameters of {base}",
            _degraded(table[base].config, reflectivity=0.9), notes="compare with R = 1 and R = 0")

    # External loss and dephasing (R = 0.98); each panel holds one of Gamma_ext, dw at 0.1Gamma and
    # overlays 0.1Gamma and 0.2Gamma of the other. The stored config is the 0.1Gamma curve.
    lossy = dict(reflectivity=0.98, gamma_ext_ratio=0.1, dephasing_ratio=0.1)
    vary_ext = "R = 0.98, dw = 0.1Gamma; Gamma_ext = 0.1Gamma and Gamma_ext = 0.2Gamma"
    vary_dw = "R = 0.98, Gamma_ext = 0.1Gamma; dw = 0.1Gamma and dw = 0.2Gamma"
    for suffix, base, caption in zip("abcd", ("fig6a", "fig6b", "fig6a", "fig6b"),
                                     (vary_ext, vary_ext, vary_dw, vary_dw)):
        add(f"fig11{suffix}", f"N = 6, {caption}; parameters of {base}",
            _degraded(table[base].config, **lossy), notes="ideal curve: R = 1, Gamma_ext = 0, dw = 0")
    for suffix, base in zip("abcd", ("fig9a", "fig9b", "fig16a", "fig16b")):
        add(f"fig13{suffix}", f"{vary_ext}; parameters of {base}",
            _degraded(table[base].config, **lossy), notes=f"the dw panel uses {vary_dw}")
    for suffix, base in zip("abcd", ("fig2a", "fig2b", "fig2c", "fig2d")):
        add(f"fig14{suffix}", f"N = 3, {vary_ext}; parameters of {base}",
            _degraded(table[base].config, **lossy), notes=f"the dw panel uses {vary_dw}")

    # Array of giant atoms sharing the waveguide
    add("fig15", "Q giant atoms with N_q coupling points each, spaced x0 from the mirror",
        MultiAtomConfig.create(
            atoms=[AtomSpec(n_points=3, amplitude_re=1.0), AtomSpec(n_points=3)],
            omega0_tau0=2 * PI,
            gamma_tau0=0.05 * PI,
        ),
        notes="schematic figure; parameters are illustrative")
    return table


PRESETS: Dict[str, Preset] = _build_table()


def get_preset(name: str) -> Preset:
    """
    Look up a preset by name (case-insensitive).

    Raises:
        ValidationError: unknown preset
    """
    preset = PRESETS.get(name.lower())
    if preset is None:
        raise ValidationError(
            message=f"Unknown preset '{name}'",
            handler="cli",
            function="get_preset",
            field="preset"
        )
    return preset


def preset_table() -> dict:
    return {"version": PRESET_TABLE_VERSION, "presets": [p.to_dict() for p in PRESETS.values()]}
