"""
GIANTWAVE DDE Integrator
========================
Method of steps for the giant-atom delay equations on a grid h = tau0/M.

Every delay is an integer multiple of tau0, so all delayed samples land on
grid nodes and a whole window of M steps only reads history from earlier
windows. Inside a window the classical RK4 update of

    du/dt = a*u + g(t)

(a: local rate, g: delayed feedback, known for the window) is the linear
recursion u[j+1] = P*u[j] + q[j], which is run with scipy.signal.lfilter.
Half-step delayed values come from cubic Hermite interpolation of the stored
history.
"""

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.signal import lfilter

from giantwave.common.constants import DEFAULT_STEPS_PER_TAU0, MIN_STEPS_PER_TAU0
from giantwave.common.errors import HorizonNegative, StepTooCoarse, ValidationError
from giantwave.common.logger import get_logger
from giantwave.dde.trajectory import Frame, Trajectory
from giantwave.model.config import MultiAtomConfig, SystemConfig
from giantwave.model.kernel import DelayKernel, KernelMatrix

log = get_logger(__file__)

HANDLER = 'dde'

Coupling = Tuple[int, Union[complex, np.ndarray]]


# ============================================
# Validation
# ============================================

def check_grid(horizon: float, steps_per_tau0: int, function: str = "integrate") -> int:
    """Validate grid arguments and return the number of steps J."""
    if steps_per_tau0 < MIN_STEPS_PER_TAU0:
        raise StepTooCoarse(steps_per_tau0, MIN_STEPS_PER_TAU0, function=function)
    if horizon < 0 or not math.isfinite(horizon):
        raise HorizonNegative(horizon, function=function)
    return int(round(horizon * steps_per_tau0))


# ============================================
# Core Stepper
# ============================================

def _rk4_weights(a: np.ndarray, h: float):
    """Amplification P and forcing weights (c0, cm) of RK4 on du/dt = a*u + g."""
    H = a * h
    P = 1 + H + H ** 2 / 2 + H ** 3 / 6 + H ** 4 / 24
    c0 = 1 + H + H ** 2 / 2 + H ** 3 / 4
    cm = 4 + 2 * H + H ** 2 / 2
    return P, c0, cm


def _recurse(P: np.ndarray, forcing: np.ndarray, start: np.ndarray) -> np.ndarray:
    """y[k] = P*y[k-1] + forcing[k], y[-1] = start, per channel."""
    if np.all(P == P[0]):
        return lfilter([1.0], [1.0, -P[0]], forcing, axis=-1, zi=(P[0] * start)[:, None])[0]
    out = np.empty_like(forcing)
    for c in range(len(P)):
        out[c] = lfilter([1.0], [1.0, -P[c]], forcing[c], zi=[P[c] * start[c]])[0]
    return out


def march(
    local_rates: np.ndarray,
    couplings: Sequence[Coupling],
    initial: np.ndarray,
    steps_per_tau0: int,
    n_steps: int,
    phases: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Advance C coupled channels in the rotating frame.

    Args:
        local_rates: (C,) non-delayed rates a_c
        couplings: (d, coefficient) pairs, d >= 1 in units of tau0; a scalar
            coefficient acts on every channel's own history, a (C, C) matrix
            mixes channels
        initial: (C,) amplitudes at t = 0
        steps_per_tau0: M
        n_steps: J
        phases: optional (C, J+1) accumulated noise phase; after each step the
            amplitude is multiplied by exp(-i * increment)

    Returns:
        (u, slope_right, slope_left), each (C, J+1)
    """
    M = steps_per_tau0
    h = 1.0 / M
    a = np.asarray(local_rates, dtype=complex)
    C = len(a)
    P, c0, cm = _rk4_weights(a, h)

    u = np.zeros((C, n_steps + 1), dtype=complex)
    slope_right = np.zeros_like(u)
    slope_left = np.zeros_like(u)
    u[:, 0] = initial

    n_windows = -(-n_steps // M)
    for w in range(n_windows):
        j0 = w * M
        j1 = min(j0 + M, n_steps)
        L = j1 - j0
        g0 = np.zeros((C, L), dtype=complex)
        gm = np.zeros((C, L), dtype=complex)
        g1 = np.zeros((C, L), dtype=complex)

        for d, coef in couplings:
            # Heaviside: history before t = 0 is zero
            if d > w:
                continue
            s = (w - d) * M
            left = u[:, s:s + L]
            right = u[:, s + 1:s + L + 1]
            mid = 0.5 * (left + right) + (h / 8.0) * (slope_right[:, s:s + L] - slope_left[:, s + 1:s + L + 1])
            if np.ndim(coef) == 0:
                g0 += coef * left
                gm += coef * mid
                g1 += coef * right
            else:
                g0 += coef @ left
                gm += coef @ mid
                g1 += coef @ right

        forcing = (h / 6.0) * (c0[:, None] * g0 + cm[:, None] * gm + g1)
        if phases is None:
            u[:, j0 + 1:j1 + 1] = _recurse(P, forcing, u[:, j0])
        else:
            turn = np.exp(1j * phases[:, j0:j1 + 1])
            v = _recurse(P, turn[:, :-1] * forcing, turn[:, 0] * u[:, j0])
            u[:, j0 + 1:j1 + 1] = v / turn[:, 1:]

        slope_right[:, j0:j1] = a[:, None] * u[:, j0:j1] + g0
        slope_left[:, j0 + 1:j1 + 1] = a[:, None] * u[:, j0 + 1:j1 + 1] + g1

    return u, slope_right, slope_left


# ============================================
# Single Atom
# ============================================

def rotating_couplings(kernel: DelayKernel, omega0_tau0: float) -> List[Coupling]:
    """Delayed kernel entries with the rotating-frame phase exp(i*omega0*d)."""
    return [(d, c * np.exp(1j * omega0_tau0 * d)) for d, c in kernel.delayed().items()]


def local_rate(config: SystemConfig, kernel: DelayKernel) -> complex:
    """Instantaneous decay: d = 0 kernel term plus the external loss -N*Gamma_ext/2."""
    return kernel.local_rate - config.n_points * config.gamma_ext / 2.0


def integrate(
    config: SystemConfig,
    kernel: DelayKernel,
    horizon: float,
    steps_per_tau0: int = DEFAULT_STEPS_PER_TAU0,
    frame: Frame = Frame.LAB,
) -> Trajectory:
    """
    Deterministic amplitude eps(t) of one giant atom starting in |e, 0>.

    Args:
        horizon: final time in units of tau0
        steps_per_tau0: M (h = tau0/M)

    Raises:
        StepTooCoarse: M < 50
        HorizonNegative: horizon < 0
    """
    n_steps = check_grid(horizon, steps_per_tau0)
    log.debug(f"Integrating N={config.n_points} to t={horizon:.3f} tau0 ({n_steps} steps)")
    u, right, left = march(
        np.array([local_rate(config, kernel)]),
        rotating_couplings(kernel, config.omega0_tau0),
        np.array([1.0 + 0j]),
        steps_per_tau0,
        n_steps,
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
# Multiple Atoms
# ============================================

def integrate_multi(
    config: MultiAtomConfig,
    kernels: KernelMatrix,
    horizon: float,
    steps_per_tau0: int = DEFAULT_STEPS_PER_TAU0,
    frame: Frame = Frame.LAB,
) -> List[Trajectory]:
    """
    Coupled amplitudes eps_q(t), one Trajectory per atom, on a shared grid.

    The rotating frame uses the common omega0; each atom keeps its detuning
    delta_q as a local rate (twice when duplicate_detuning is set).
    """
    n_steps = check_grid(horizon, steps_per_tau0, function="integrate_multi")
    Q = config.n_atoms
    if len(kernels) != Q or any(len(row) != Q for row in kernels):
        raise ValidationError(
            message=f"kernel matrix must be {Q}x{Q}",
            handler=HANDLER,
            function="integrate_multi",
            field="kernels"
        )

    detuning_weight = 2.0 if config.duplicate_detuning else 1.0
    rates = np.array([
        kernels[q][q].local_rate
        - atom.n_points * config.gamma_ext / 2.0
        - 1j * detuning_weight * atom.detuning_ratio * config.gamma_tau0
        for q, atom in enumerate(config.atoms)
    ])

    delays = sorted({d for row in kernels for block in row for d in block.delayed()})
    couplings: List[Coupling] = []
    for d in delays:
        matrix = np.zeros((Q, Q), dtype=complex)
        for q in range(Q):
            for p in range(Q):
                matrix[q, p] = kernels[q][p].delayed().get(d, 0j)
        couplings.append((d, matrix * np.exp(1j * config.omega0_tau0 * d)))

    initial = np.array([atom.amplitude for atom in config.atoms])
    log.info(f"Integrating {Q} atoms ({config.coupling_mode.value}) to t={horizon:.3f} tau0")
    u, right, left = march(rates, couplings, initial, steps_per_tau0, n_steps)
    return [
        Trajectory(
            steps_per_tau0=steps_per_tau0,
            omega0_tau0=config.omega0_tau0,
            rotating=u[q],
            slope_right=right[q],
            slope_left=left[q],
            frame=frame,
        )
        for q in range(Q)
    ]
