"""SplitMix64 random streams with deterministic substreams.

A stream is a 64-bit counter advanced by the golden-ratio increment; each
output is the counter passed through the SplitMix64 finalizer. Because the
k-th output depends only on (state, k), blocks of draws vectorize cleanly in
numpy and any replication's substream can be rebuilt from (seed, index)
without touching the others.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO_M52 = 2.0 ** -52

_GAMMA_U = np.uint64(GOLDEN_GAMMA)
_M1_U = np.uint64(_M1)
_M2_U = np.uint64(_M2)


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer over a uint64 array (wrapping arithmetic)."""
    z = z ^ (z >> np.uint64(30))
    z = z * _M1_U
    z = z ^ (z >> np.uint64(27))
    z = z * _M2_U
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, index: int) -> int:
    """Seed of substream `index`: one mixing round over seed + (index + 1) * gamma."""
    return mix64((seed + (index + 1) * GOLDEN_GAMMA) & MASK64)


def derive_seeds(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Vectorized derive_seed for indices start, ..., start + count - 1."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return mix64_array(np.uint64(seed & MASK64) + idx * _GAMMA_U)


def u64_to_unit(z):
    """Map 64-bit outputs to doubles strictly inside (0, 1).

    Uses the top 52 bits: (k + 1/2) 2^-52 is exact, and its maximum 1 - 2^-53
    is representable, whereas a 53-bit midpoint would round up to 1.0.
    """
    if isinstance(z, np.ndarray):
        return ((z >> np.uint64(12)).astype(np.float64) + 0.5) * _TWO_M52
    return ((z >> 12) + 0.5) * _TWO_M52


def block_u64(states: np.ndarray, count: int) -> np.ndarray:
    """First `count` outputs of each stream whose current state is in `states`.

    Returns an array of shape (len(states), count).
    """
    steps = np.arange(1, count + 1, dtype=np.uint64) * _GAMMA_U
    return mix64_array(states.astype(np.uint64)[:, None] + steps[None, :])


def unit_to_index(u, n: int):
    """Uniform index in [0, n) from a unit double."""
    if isinstance(u, np.ndarray):
        return np.minimum((u * n).astype(np.int64), n - 1)
    return min(int(u * n), n - 1)


class RandomStream:
    """A SplitMix64 stream. Not shared between replications."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    @classmethod
    def substream(cls, seed: int, index: int) -> "RandomStream":
        return cls(derive_seed(seed, index))

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        return u64_to_unit(self.next_u64())

    def uniforms(self, count: int) -> np.ndarray:
        """`count` uniforms, identical to `count` successive uniform() calls."""
        out = block_u64(np.array([self.state], dtype=np.uint64), count)[0]
        self.state = (self.state + count * GOLDEN_GAMMA) & MASK64
        return u64_to_unit(out)

    def index(self, n: int) -> int:
        return unit_to_index(self.uniform(), n)

    def __repr__(self) -> str:
        return f"RandomStream(state=0x{self.state:016x})"
