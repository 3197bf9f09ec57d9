"""Counter-based pseudo-random generator.

A stateless SplitMix64-style mixer: every draw is a pure function of
(seed, counter), so parallel workers and re-runs see identical streams
regardless of evaluation order.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def rand_u64(seed: int, counter: int) -> int:
    z = (seed * _GOLDEN + counter * _MIX1 + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def uniform(seed: int, counter: int) -> float:
    """A float in [0, 1) with 53 random bits."""
    return (rand_u64(seed, counter) >> 11) * (1.0 / (1 << 53))


def randint(seed: int, counter: int, lo: int, hi: int) -> int:
    """An integer in [lo, hi] inclusive."""
    if hi < lo:
        raise ValueError("empty range")
    return lo + rand_u64(seed, counter) % (hi - lo + 1)


class Stream:
    """Sequential convenience wrapper over the counter-based core."""

    def __init__(self, seed: int, start: int = 0):
        self.seed = seed
        self.counter = start

    def _next(self) -> int:
        v = rand_u64(self.seed, self.counter)
        self.counter += 1
        return v

    def uniform(self) -> float:
        return (self._next() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo: int, hi: int) -> int:
        if hi < lo:
            raise ValueError("empty range")
        return lo + self._next() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]
