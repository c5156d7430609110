"""Deterministic random number generator used everywhere seeds appear.

The generator is counter-based SplitMix64: output k of a stream seeded
with ``s`` is ``mix64(s + (k+1) * 0x9E3779B97F4A7C15)`` where ``mix64``
is the usual xorshift-multiply finalizer.  Because each output is a pure
function of (seed, counter), bulk draws vectorize with numpy uint64
arithmetic while staying bit-identical to one-at-a-time draws.

Doubles come from the top 53 bits: ``(u64 >> 11) * 2**-53`` in [0, 1).
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64
_INV_2_53 = 2.0 ** -53


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


class Rng:
    """Explicit-seed stream of uniform doubles and integers."""

    def __init__(self, seed: int):
        self._seed = _U64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def _raw(self, n: int) -> np.ndarray:
        ks = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            return _mix64(self._seed + ks * _GAMMA)

    def next_u64(self) -> int:
        return int(self._raw(1)[0])

    def uniform(self, n: int | None = None, low: float = 0.0, high: float = 1.0):
        """Uniform doubles in [low, high); scalar when n is None."""
        scalar = n is None
        u = (self._raw(1 if scalar else n) >> _U64(11)).astype(np.float64) * _INV_2_53
        out = low + (high - low) * u
        return float(out[0]) if scalar else out

    def randint(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top 64 bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> np.ndarray:
        idx = list(range(n))
        self.shuffle(idx)
        return np.asarray(idx, dtype=np.int64)
