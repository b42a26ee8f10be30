"""
GIANTWAVE Characteristic Function
=================================
Laplace-domain characteristic function of one giant atom in front of a mirror.
With z = exp(-s*tau0) and tau0 = 1,

    D(s) = s + i*omega0 + (Gamma/2) * [S1(z) - r*S2(z)] + N*Gamma_ext/2

    S1(z) = sum_{m,n} z^|m-n| = 2(N - (N+1)z + z^(N+1)) / (1-z)^2 - N
    S2(z) = sum_{m,n} z^(m+n) = z^2 (1 - z^N)^2 / (1-z)^2

The amplitude transform is 1/D(s), so every zero s_k of D is a pole with
residue weight 1/D'(s_k). The closed forms cancel to about (N|1-z|)^2 of
their terms near z = 1; inside N|1-z| < SERIES_SWITCH the pair-count
polynomials are evaluated directly instead.
"""

from typing import Tuple

import numpy as np

from giantwave.common.constants import SERIES_SWITCH
from giantwave.common.logger import get_logger
from giantwave.model.config import SystemConfig

log = get_logger(__file__)


# ============================================
# Pair-Sum Polynomials
# ============================================

def pair_sum_counts(n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polynomial coefficients of S1 and S2 indexed by power d = 0..2N.

    Example:
        N=2 -> S1: [2, 2, 0, 0, 0], S2: [0, 0, 1, 2, 1]
    """
    N = n_points
    d = np.arange(2 * N + 1)
    direct = np.where(d == 0, N, 2 * np.clip(N - d, 0, None))
    mirror = np.where(d >= 2, np.clip(N - np.abs(d - (N + 1)), 0, None), 0)
    return direct.astype(float), mirror.astype(float)


def _horner(counts: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """sum_d c_d z^d and its z-derivative."""
    value = np.polyval(counts[::-1], z)
    slope = np.polyval((counts[1:] * np.arange(1, len(counts)))[::-1], z)
    return value, slope


def geometric_sums(z, n_points: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """S1, S2 and their z-derivatives."""
    z = np.asarray(z, dtype=complex)
    N = n_points
    S1 = np.empty_like(z)
    S2 = np.empty_like(z)
    dS1 = np.empty_like(z)
    dS2 = np.empty_like(z)

    near = N * np.abs(1.0 - z) < SERIES_SWITCH
    far = ~near

    if np.any(far):
        zf = z[far]
        one = 1.0 - zf
        zN = zf ** N
        P = N - (N + 1) * zf + zN * zf
        dP = (N + 1) * (zN - 1.0)
        S1[far] = 2.0 * P / one ** 2 - N
        dS1[far] = 2.0 * (dP * one + 2.0 * P) / one ** 3
        G = (zf - zN * zf) / one
        dG = ((1.0 - (N + 1) * zN) * one + (zf - zN * zf)) / one ** 2
        S2[far] = G * G
        dS2[far] = 2.0 * G * dG

    if np.any(near):
        direct, mirror = pair_sum_counts(N)
        S1[near], dS1[near] = _horner(direct, z[near])
        S2[near], dS2[near] = _horner(mirror, z[near])

    return S1, S2, dS1, dS2


# ============================================
# Residual and Derivative
# ============================================

def char_residual(s, config: SystemConfig):
    """
    D(s) for complex s in 1/tau0. Accepts scalars or arrays.

    Example:
        N=3, omega0*tau0 = 2*pi, s = -2j*pi -> 0
    """
    s_arr = np.asarray(s, dtype=complex)
    S1, S2, _, _ = geometric_sums(np.exp(-s_arr), config.n_points)
    value = (
        s_arr + 1j * config.omega0_tau0
        + 0.5 * config.gamma_tau0 * (S1 - config.mirror_amplitude * S2)
        + 0.5 * config.n_points * config.gamma_ext
    )
    return value if value.ndim else complex(value)


def char_derivative(s, config: SystemConfig):
    """dD/ds = 1 - (Gamma/2) * z * (S1'(z) - r*S2'(z))."""
    s_arr = np.asarray(s, dtype=complex)
    z = np.exp(-s_arr)
    _, _, dS1, dS2 = geometric_sums(z, config.n_points)
    value = 1.0 - 0.5 * config.gamma_tau0 * z * (dS1 - config.mirror_amplitude * dS2)
    return value if value.ndim else complex(value)


def char_residual_direct(s, config: SystemConfig):
    """D(s) from the explicit double sum over coupling-point pairs."""
    s_arr = np.asarray(s, dtype=complex)
    points = np.arange(1, config.n_points + 1)
    m = points[:, None]
    n = points[None, :]
    ss = s_arr[..., None, None]
    pair_sum = np.sum(np.exp(-ss * np.abs(m - n)) - config.mirror_amplitude * np.exp(-ss * (m + n)), axis=(-2, -1))
    value = (
        s_arr + 1j * config.omega0_tau0
        + 0.5 * config.gamma_tau0 * pair_sum
        + 0.5 * config.n_points * config.gamma_ext
    )
    return value if value.ndim else complex(value)


def residue_weight(s, config: SystemConfig):
    """Residue of 1/D at a zero s_k: 1 / D'(s_k)."""
    return 1.0 / char_derivative(s, config)


# ============================================
# Imaginary Axis
# ============================================

def imaginary_axis_split(omega_tau0, config: SystemConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Real and imaginary parts of D(-i*omega) from trigonometric sums.

    With theta = omega*tau0, F = sin^2(N*theta/2) / sin^2(theta/2):
        Re S1 = F,  Im S1 = (N sin(theta) - sin(N*theta)) / (2 sin^2(theta/2))
        S2 = F * exp(i(N+1)theta)

    At theta in 2*pi*Z the limits F = N^2, Im S1 = 0 are used.
    """
    theta = np.asarray(omega_tau0, dtype=float)
    N = config.n_points
    r = config.mirror_amplitude
    half = np.sin(theta / 2.0) ** 2
    singular = half < 1e-24
    safe = np.where(singular, 1.0, half)

    F = np.where(singular, float(N * N), np.sin(N * theta / 2.0) ** 2 / safe)
    im_s1 = np.where(singular, 0.0, (N * np.sin(theta) - np.sin(N * theta)) / (2.0 * safe))
    s2_re = F * np.cos((N + 1) * theta)
    s2_im = F * np.sin((N + 1) * theta)

    rs2_re = r.real * s2_re - r.imag * s2_im
    rs2_im = r.real * s2_im + r.imag * s2_re

    half_gamma = 0.5 * config.gamma_tau0
    re = half_gamma * (F - rs2_re) + 0.5 * N * config.gamma_ext
    im = config.omega0_tau0 - theta + half_gamma * (im_s1 - rs2_im)
    return re, im
