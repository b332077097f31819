"""Randomness sources for scalar sampling.

Every operation that samples scalars takes an injected source so tests can
run deterministically.  Two implementations share the rejection-sampling
logic and differ only in where raw bytes come from: the OS CSPRNG, or a
SHAKE-256 counter stream derived from a seed (stable across platforms and
Python versions, unlike random.Random).
"""

from __future__ import annotations

import secrets
from hashlib import shake_256


class RandomSource:
    """Base class; subclasses provide fill(k) returning k random bytes."""

    def fill(self, k: int) -> bytes:
        raise NotImplementedError

    def scalar(self, order: int) -> int:
        """Uniform integer in [0, order)."""
        bits = order.bit_length()
        nbytes = (bits + 7) // 8
        mask = (1 << bits) - 1
        while True:
            v = int.from_bytes(self.fill(nbytes), "big") & mask
            if v < order:
                return v

    def scalar_nonzero(self, order: int) -> int:
        """Uniform integer in [1, order)."""
        while True:
            v = self.scalar(order)
            if v != 0:
                return v


class SystemRandom(RandomSource):
    """OS-backed source for real use."""

    def fill(self, k: int) -> bytes:
        return secrets.token_bytes(k)


class DeterministicRandom(RandomSource):
    """Seeded SHAKE-256 counter stream.  Test use only."""

    def __init__(self, seed: int | bytes):
        if isinstance(seed, int):
            if seed < 0:
                raise ValueError("seed must be nonnegative")
            seed = seed.to_bytes((seed.bit_length() + 7) // 8 or 1, "big")
        self._seed = bytes(seed)
        self._counter = 0
        self._buf = b""

    def fill(self, k: int) -> bytes:
        while len(self._buf) < k:
            block = shake_256(
                b"kapre-drbg" + len(self._seed).to_bytes(4, "big") + self._seed
                + self._counter.to_bytes(8, "big")
            ).digest(128)
            self._counter += 1
            self._buf += block
        out, self._buf = self._buf[:k], self._buf[k:]
        return out
