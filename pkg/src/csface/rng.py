"""Pinned pseudo-random generator.

Masks and splits must be reproducible by other implementations, so the
generator and the way it draws integers are fixed here instead of relying
on numpy's Generator internals:

* SplitMix64 (64-bit state, Steele/Lea/Flood 2014) seeded directly with the
  user seed (reduced mod 2**64);
* bounded integers by rejection: draw ``r`` until ``r < 2**64 - (2**64 % n)``
  and return ``r % n``;
* sampling without replacement by a partial Fisher-Yates shuffle.
"""
import hashlib

MASK64 = (1 << 64) - 1
ALGORITHM = "splitmix64+rejection+partial-fisher-yates"


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def sample(self, population, k: int) -> list:
        """First ``k`` entries of a partial Fisher-Yates shuffle of ``population``."""
        pool = list(population)
        if not 0 <= k <= len(pool):
            raise ValueError("sample size out of range")
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary printable parts (BLAKE2b, little endian)."""
    text = "/".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")
