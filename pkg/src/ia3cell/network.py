"""Three-cell uplink configuration and generic channel generation.

Indices are 1-based everywhere: BS/cell indices in {1, 2, 3}, user indices
in {1, ..., K}.  ``H[(i, k, j)]`` is the M x N channel from user j of cell k
to BS i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvalidInputError

CELLS = 3

__all__ = [
    "CELLS",
    "NetworkConfig",
    "ChannelSet",
    "generate_channels",
    "combine_channels",
    "stacked_interference_matrix",
    "channels_to_json",
    "channels_from_json",
]


@dataclass(frozen=True)
class NetworkConfig:
    """Problem dimensions: BS antennas M, MS antennas N, users per cell K,
    streams per user d.  The cell count is fixed at 3."""

    M: int
    N: int
    K: int
    d: int

    def __post_init__(self):
        if self.N < 1:
            raise ConfigurationError(f"N must be >= 1, got N={self.N}")
        if self.M <= self.N:
            raise ConfigurationError(f"M must exceed N, got M={self.M}, N={self.N}")
        if self.K <= 1:
            raise ConfigurationError(f"K must be > 1, got K={self.K}")
        if self.d < 1:
            raise ConfigurationError(f"d must be >= 1, got d={self.d}")
        if self.M > self.K * self.N:
            raise ConfigurationError(
                f"M must not exceed K*N={self.K * self.N}, got M={self.M}"
            )


@dataclass(frozen=True)
class ChannelSet:
    """All 9K uplink channel matrices for one channel realization."""

    config: NetworkConfig
    seed: int
    H: dict[tuple[int, int, int], np.ndarray] = field(repr=False)

    def __post_init__(self):
        M, N, K = self.config.M, self.config.N, self.config.K
        for i in range(1, CELLS + 1):
            for k in range(1, CELLS + 1):
                for j in range(1, K + 1):
                    mat = self.H.get((i, k, j))
                    if mat is None or mat.shape != (M, N):
                        raise InvalidInputError(
                            f"channel ({i},{k},{j}) missing or not {M}x{N}"
                        )


def generate_channels(config: NetworkConfig, seed: int) -> ChannelSet:
    """Draw all channels i.i.d. CN(0, 1) from a seeded stream.

    Draw order is fixed (BS i, then cell k, then user j, row-major within a
    matrix, real part before imaginary part per entry), so the same seed
    reproduces the same ChannelSet bit-for-bit.
    """
    rng = np.random.default_rng(seed)
    H = {}
    for i in range(1, CELLS + 1):
        for k in range(1, CELLS + 1):
            for j in range(1, config.K + 1):
                parts = rng.standard_normal((config.M, config.N, 2))
                mat = (parts[..., 0] + 1j * parts[..., 1]) / np.sqrt(2.0)
                mat.setflags(write=False)
                H[(i, k, j)] = mat
    return ChannelSet(config=config, seed=seed, H=H)


def _check_cell_index(name: str, value: int) -> None:
    if value not in (1, 2, 3):
        raise IndexError(f"{name} must be in {{1, 2, 3}}, got {value}")


def combine_channels(ch: ChannelSet, bs: int, cell: int) -> np.ndarray:
    """M x KN concatenation [H_bs^{[cell,1]} ... H_bs^{[cell,K]}]."""
    _check_cell_index("bs", bs)
    _check_cell_index("cell", cell)
    return np.hstack([ch.H[(bs, cell, j)] for j in range(1, ch.config.K + 1)])


def stacked_interference_matrix(ch: ChannelSet) -> np.ndarray:
    """3M x 3KN block matrix of all cross-cell channels.

    Block row i has exact zero blocks for cell i's own users and
    H_i^{[kj]} blocks for k != i, users in order 1..K.
    """
    M, N, K = ch.config.M, ch.config.N, ch.config.K
    zero = np.zeros((M, K * N), dtype=np.complex128)
    rows = []
    for i in range(1, CELLS + 1):
        blocks = []
        for k in range(1, CELLS + 1):
            if k == i:
                blocks.append(zero)
            else:
                blocks.append(combine_channels(ch, i, k))
        rows.append(np.hstack(blocks))
    return np.vstack(rows)


def channels_to_json(ch: ChannelSet) -> str:
    """Serialize a ChannelSet to the debug/golden-test JSON schema."""
    cfg = ch.config
    payload = {
        "config": {"M": cfg.M, "N": cfg.N, "K": cfg.K, "d": cfg.d},
        "seed": ch.seed,
        "H": {
            f"{i},{k},{j}": [
                [float(z.real), float(z.imag)] for z in ch.H[(i, k, j)].ravel()
            ]
            for (i, k, j) in sorted(ch.H)
        },
    }
    return json.dumps(payload)


def channels_from_json(text: str) -> ChannelSet:
    """Inverse of channels_to_json."""
    payload = json.loads(text)
    cfg = NetworkConfig(**payload["config"])
    H = {}
    for key, pairs in payload["H"].items():
        i, k, j = (int(p) for p in key.split(","))
        flat = np.array([complex(re, im) for re, im in pairs])
        mat = flat.reshape(cfg.M, cfg.N)
        mat.setflags(write=False)
        H[(i, k, j)] = mat
    return ChannelSet(config=cfg, seed=int(payload["seed"]), H=H)
