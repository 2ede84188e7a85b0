"""Deterministic splittable random generator (splitmix64).

Every randomized scenario draws from this generator so that a run is fully
determined by its integer seed, and so that the exact stream can be
reproduced in any language from the recipe below:

    state <- state + 0x9E3779B97F4A7C15   (mod 2^64)
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2^64)
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB   (mod 2^64)
    output <- z XOR (z >> 31)

Uniform doubles take the top 53 bits: (output >> 11) * 2^-53.  Standard
normals come from the Box-Muller transform applied to consecutive uniform
pairs (u1 clamped away from 0).  Substreams are derived by hashing a text
label with FNV-1a (64-bit) and mixing it into the parent seed through one
splitmix64 step; deriving never advances the parent stream.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _fnv1a(label: str) -> int:
    h = _FNV_OFFSET
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


class SplitMix:
    """Counter-based splitmix64 stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_raw(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_raw() >> 11) * 2.0 ** -53

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        span = hi - lo + 1
        return lo + int(self.uniform() * span) % span

    def normal(self) -> float:
        u1 = max(self.uniform(), 2.0 ** -53)
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def complex_normal(self) -> complex:
        return complex(self.normal(), self.normal())

    def derive(self, label: str) -> "SplitMix":
        """Independent child stream keyed by a label; parent is untouched."""
        return SplitMix(_mix(self._state ^ _fnv1a(label)))
