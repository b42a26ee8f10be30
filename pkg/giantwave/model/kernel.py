"""
GIANTWAVE Delay Kernel
======================
Collapses the double sums over coupling-point pairs (m, n) into a flat list
of retardations d*tau0 with complex weights.

Direct channel:  photon travels m -> n without the mirror, d = |m - n|,
                 weight -(Gamma/2) * #pairs.
Mirror channel:  photon reflects off the mirror first, d = m + n,
                 weight +(Gamma/2) * r * #pairs.

The d = 0 Direct entry is the instantaneous (Markovian) self term; the
integrator treats it as a local rate.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np

from giantwave.common.logger import get_logger
from giantwave.model.config import CouplingMode, MultiAtomConfig, SystemConfig

log = get_logger(__file__)


class Channel(str, Enum):
    DIRECT = "direct"
    MIRROR = "mirror"


@dataclass(frozen=True)
class KernelEntry:
    delay: int
    count: int
    coefficient: complex
    channel: Channel


@dataclass(frozen=True)
class DelayKernel:
    """Sorted (channel, delay) entries of one coupling block."""
    entries: Tuple[KernelEntry, ...] = ()

    def channel(self, channel: Channel) -> Dict[int, complex]:
        return {e.delay: e.coefficient for e in self.entries if e.channel == channel}

    @property
    def direct(self) -> Dict[int, complex]:
        return self.channel(Channel.DIRECT)

    @property
    def mirror(self) -> Dict[int, complex]:
        return self.channel(Channel.MIRROR)

    def counts(self, channel: Channel) -> Dict[int, int]:
        return {e.delay: e.count for e in self.entries if e.channel == channel}

    @property
    def max_delay(self) -> int:
        return max((e.delay for e in self.entries), default=0)

    @property
    def local_rate(self) -> complex:
        """Coefficient of the non-delayed (d = 0) term."""
        return sum((e.coefficient for e in self.entries if e.delay == 0), 0j)

    def delayed(self) -> Dict[int, complex]:
        """Summed coefficient per delay d >= 1, both channels merged."""
        merged: Dict[int, complex] = {}
        for e in self.entries:
            if e.delay > 0:
                merged[e.delay] = merged.get(e.delay, 0j) + e.coefficient
        return dict(sorted(merged.items()))

    def is_empty(self) -> bool:
        return not self.entries


KernelMatrix = Tuple[Tuple[DelayKernel, ...], ...]


# ============================================
# Pair Counting
# ============================================

def _pair_counts(points_a: Sequence[int], points_b: Sequence[int]) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Count coupling-point pairs by |m - n| and by m + n."""
    m = np.asarray(points_a, dtype=np.int64)[:, None]
    n = np.asarray(points_b, dtype=np.int64)[None, :]
    direct_d, direct_c = np.unique(np.abs(m - n), return_counts=True)
    mirror_d, mirror_c = np.unique(m + n, return_counts=True)
    return (
        {int(d): int(c) for d, c in zip(direct_d, direct_c)},
        {int(d): int(c) for d, c in zip(mirror_d, mirror_c)},
    )


def _block_kernel(points_a: Sequence[int], points_b: Sequence[int], gamma_tau0: float, r: complex) -> DelayKernel:
    direct, mirror = _pair_counts(points_a, points_b)
    half = gamma_tau0 / 2.0
    entries: List[KernelEntry] = [
        KernelEntry(delay=d, count=c, coefficient=complex(-half * c), channel=Channel.DIRECT)
        for d, c in sorted(direct.items())
    ]
    # r = 0 removes every mirror path
    if r != 0:
        entries += [
            KernelEntry(delay=d, count=c, coefficient=half * r * c, channel=Channel.MIRROR)
            for d, c in sorted(mirror.items())
        ]
    return DelayKernel(entries=tuple(entries))


# ============================================
# Public Builders
# ============================================

def build_kernel(config: SystemConfig) -> DelayKernel:
    """
    Delay kernel of a single giant atom.

    Example:
        N=1, R=1 -> Direct {0: -Gamma/2}, Mirror {2: +Gamma/2}
    """
    points = range(1, config.n_points + 1)
    return _block_kernel(points, points, config.gamma_tau0, config.mirror_amplitude)


def build_multi_kernel(config: MultiAtomConfig) -> KernelMatrix:
    """
    Q x Q matrix of delay kernels; entry [q][p] feeds atom p's history into atom q.

    AsPrinted keeps only the diagonal blocks. FullCrossCoupling also fills the
    off-diagonal blocks with the same pair counting across the two atoms' points.
    """
    blocks = [
        range(offset + 1, offset + atom.n_points + 1)
        for offset, atom in zip(config.offsets, config.atoms)
    ]
    r = config.mirror_amplitude
    matrix = []
    for q, points_q in enumerate(blocks):
        row = []
        for p, points_p in enumerate(blocks):
            if q == p or config.coupling_mode == CouplingMode.FULL_CROSS:
                row.append(_block_kernel(points_q, points_p, config.gamma_tau0, r))
            else:
                row.append(DelayKernel())
        matrix.append(tuple(row))
    log.debug(f"Built {config.n_atoms}x{config.n_atoms} kernel matrix ({config.coupling_mode.value})")
    return tuple(matrix)
