"""Deterministic seeded random streams.

Every stochastic choice in the pipeline (positional jitter, dispersed
group shuffling, retinal perturbation, displacement relaxation) draws
from a stream keyed by (seed, channel, identity). Streams are derived
with splitmix64, so a primitive's randomness never depends on list
length, evaluation order, platform, or library version.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Stream channels. Frozen: changing any value changes every seeded output.
CH_JITTER = 0x01
CH_DISPERSE = 0x02
CH_DISPLACE = 0x03
CH_STYLE = 0x04

# Per-variable sub-channels for retinal perturbation streams.
VAR_SIZE = 0x10
VAR_ORIENTATION = 0x11
VAR_LIGHTNESS = 0x12
VAR_HUE = 0x13
VAR_SHAPE = 0x14
VAR_SATURATION = 0x15


def splitmix64(x: int) -> int:
    """One splitmix64 finalizer round over a 64-bit value."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_key(*parts: int) -> int:
    """Fold integer parts into one 64-bit stream key."""
    h = 0
    for p in parts:
        h = splitmix64(h ^ (p & _MASK64))
    return h


class Stream:
    """Counter-based generator seeded from integer parts.

    Successive outputs are splitmix64 of an advancing counter; two streams
    with different keys are statistically independent for our purposes.
    """

    __slots__ = ("_key", "_counter")

    def __init__(self, *parts: int) -> None:
        self._key = derive_key(*parts)
        self._counter = 0

    def next_u64(self) -> int:
        self._counter += 1
        return splitmix64(self._key ^ ((self._counter * _GOLDEN) & _MASK64))

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform_signed(self) -> float:
        """Uniform float in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0

    def normal(self, sigma: float = 1.0) -> float:
        """One Gaussian draw (Box-Muller, cosine branch)."""
        u1 = self.uniform()
        while u1 <= 0.0:
            u1 = self.uniform()
        u2 = self.uniform()
        return sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def truncated_normal(self, sigma: float, bound: float, max_attempts: int = 64) -> float:
        """Gaussian draw rejected into [-bound, bound]; clamped after the cap.

        The attempt cap bounds worst-case cost; at bound >= 2*sigma the
        clamping bias is below 1e-4.
        """
        if sigma <= 0.0 or bound <= 0.0:
            return 0.0
        z = 0.0
        for _ in range(max_attempts):
            z = self.normal(sigma)
            if -bound <= z <= bound:
                return z
        return max(-bound, min(bound, z))

    def randint(self, n: int) -> int:
        """Integer in [0, n). Modulo bias is negligible for n << 2**64."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        return self.next_u64() % n

    def choice(self, seq):
        return seq[self.randint(len(seq))]
