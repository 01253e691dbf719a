"""Deterministic pseudo-random numbers shared by every stochastic step.

A single splitmix64 stream backs harmonic start vectors, geometric point
clouds and simulated link delays, so identical seeds reproduce identical
runs bit for bit, independent of platform or library versions.  The
constants are the standard splitmix64 increment and finalizer multipliers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Stateful splitmix64 stream over 64-bit words."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_raw(self) -> int:
        """Advance and return the next 64-bit word."""
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_raw() >> 11) * 2.0**-53

    def next_centered(self) -> float:
        """Uniform double in [-0.5, 0.5)."""
        return self.next_unit() - 0.5

    def next_below(self, bound: int) -> int:
        """Integer in [0, bound) by rejection, unbiased."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # largest multiple of bound below 2**64
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            raw = self.next_raw()
            if raw < limit:
                return raw % bound

    def spawn_seed(self) -> int:
        """Derive a child seed; children are independent splitmix streams."""
        return self.next_raw()


def centered_vector(length: int, seed: int) -> np.ndarray:
    """Vector of uniform draws in [-0.5, 0.5) from a fresh stream."""
    stream = SplitMix64(seed)
    out = np.empty(length, dtype=np.float64)
    for i in range(length):
        out[i] = stream.next_centered()
    return out
