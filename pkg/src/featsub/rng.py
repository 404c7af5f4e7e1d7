"""A small portable PRNG so generated instances are identical in any language.

Seeding: splitmix64 applied once to the user seed::

    z = (seed + 0x9E3779B97F4A7C15) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    state = z ^ (z >> 31)          (a zero state is replaced by the golden constant)

Generation: xorshift64*::

    x ^= x >> 12; x ^= x << 25 (mod 2^64); x ^= x >> 27
    output = x * 0x2545F4914F6CDD1D mod 2^64

``below(m)`` rejects outputs >= 2^64 - (2^64 mod m) and returns ``r mod m``.
"""
from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(seed: int) -> int:
    z = (seed + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    return splitmix64((seed ^ splitmix64(index)) & MASK)


class Rng:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK) or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % m

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def sample(self, population: int, k: int) -> list[int]:
        """``k`` distinct indices of ``range(population)`` via partial Fisher-Yates."""
        if not 0 <= k <= population:
            raise ValueError(f"cannot draw {k} of {population}")
        idx = list(range(population))
        for t in range(k):
            s = t + self.below(population - t)
            idx[t], idx[s] = idx[s], idx[t]
        return idx[:k]
