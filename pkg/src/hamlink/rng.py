"""Deterministic 64-bit random stream shared by generators and searches.

The generator is splitmix64 (Steele, Lea & Flood 2014) run in counter mode:
output ``c`` of a stream with seed ``s`` is ``mix64(s + c * GAMMA)`` where
``GAMMA = 0x9E3779B97F4A7C15`` and ``mix64`` is the splitmix64 finalizer.
Counter mode makes the stream random-access, which the vectorised tournament
generator exploits; sequential use through :class:`SplitMix64` is equivalent
to the published sequential algorithm.

Coin mapping used by generators: draw one 64-bit output per decision and use
its least significant bit (1 means "forward").
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit state."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_at(seed: int, counter: int) -> int:
    """The ``counter``-th output (1-based) of the splitmix64 stream."""
    return mix64((seed + counter * GAMMA) & MASK64)


class SplitMix64:
    """Sequential view of the counter-mode stream."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._counter = 0

    def next64(self) -> int:
        self._counter += 1
        return stream_at(self.seed, self._counter)

    def coin(self) -> bool:
        return bool(self.next64() & 1)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # Rejection keeps the distribution exact for any bound.
        limit = (MASK64 + 1) - (MASK64 + 1) % bound
        while True:
            x = self.next64()
            if x < limit:
                return x % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates driven by the stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: list, k: int) -> list:
        pool = list(items)
        self.shuffle(pool)
        return pool[:k]

    def spawn(self, tag: int) -> "SplitMix64":
        """Independent child stream, stable in (seed, tag)."""
        return SplitMix64(mix64(self.seed ^ mix64(tag ^ 0xA5A5A5A5A5A5A5A5)))
