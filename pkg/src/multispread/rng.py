"""Seeded random streams.

Every stream is a PCG64 bit generator (numpy) fed by a ``SeedSequence``.
Only the raw 64-bit output words are consumed, and all derived values are
computed here, so trajectories do not depend on numpy's distribution code:

* uniform double: ``(word >> 11) * 2**-53``, in [0, 1)
* bounded integer in [0, n): rejection sampling on ``word % n``
* shuffle: Fisher-Yates, from the last position down

Child streams come from ``SeedSequence(seed).spawn``; the first child is
used for initial-state draws and the second for Bernoulli trials.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_BUFFER = 1024
_INV_2_53 = 1.0 / (1 << 53)


def seed_sequence(seed: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed) & MASK64)


class Stream:
    """Buffered view over one PCG64 stream."""

    def __init__(self, seed: int | np.random.SeedSequence):
        if not isinstance(seed, np.random.SeedSequence):
            seed = seed_sequence(seed)
        self._bits = np.random.PCG64(seed)
        self._buf: list[int] = []
        self._pos = 0

    def next_u64(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self._bits.random_raw(_BUFFER).tolist()
            self._pos = 0
        word = self._buf[self._pos]
        self._pos += 1
        return word

    def random(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def bernoulli(self, p: float) -> bool:
        return self.random() < p

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        # largest multiple of n that fits in 64 bits
        limit = ((1 << 64) // n) * n
        while True:
            word = self.next_u64()
            if word < limit:
                return word % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def uniforms(self, count: int) -> np.ndarray:
        """Bulk draw of ``count`` doubles, same sequence as repeated ``random()``."""
        out = np.empty(count, dtype=np.float64)
        filled = 0
        # drain the scalar buffer first so bulk and scalar draws interleave consistently
        while filled < count and self._pos < len(self._buf):
            out[filled] = self.random()
            filled += 1
        if filled < count:
            words = self._bits.random_raw(count - filled)
            out[filled:] = (words >> np.uint64(11)).astype(np.float64) * _INV_2_53
        return out


def split(seed: int, n: int) -> list[Stream]:
    """``n`` independent child streams derived from ``seed``."""
    return [Stream(child) for child in seed_sequence(seed).spawn(n)]


def derive_seeds(seed: int, n: int) -> list[int]:
    """``n`` distinct 64-bit seeds derived from ``seed``."""
    return [int(child.generate_state(1, np.uint64)[0]) for child in seed_sequence(seed).spawn(n)]
