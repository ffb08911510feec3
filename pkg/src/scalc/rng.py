"""Deterministic random generation for the law suite.

The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter
advanced by the golden-gamma constant and finalized with two xor-multiply
rounds.  It is tiny, has no platform-dependent behavior, and the same seed
yields the same stream everywhere, which is what reproducible law trials
need.  Stream splitting is done by hashing a textual label with BLAKE2b
keyed by the base seed, so every (law, size, trial, symbol) combination gets
an independent, stable seed.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def bits(self, n: int) -> int:
        """An n-bit integer, each bit independently fair."""
        out = 0
        filled = 0
        while filled < n:
            out |= self.next_u64() << filled
            filled += 64
        return out & ((1 << n) - 1)

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n); modulo bias is irrelevant at our sizes."""
        return self.next_u64() % n


def derive_seed(base: int, label: str) -> int:
    """Stable 64-bit seed for a named substream of `base`."""
    digest = hashlib.blake2b(
        label.encode("utf-8"), digest_size=8, key=(base & MASK64).to_bytes(8, "little")
    ).digest()
    return int.from_bytes(digest, "little")
