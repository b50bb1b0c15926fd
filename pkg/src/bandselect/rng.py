"""Portable seeded random numbers for fixtures and synthetic data.

Everything reproducibility-sensitive in this package (synthetic bands,
train/test splits) draws from :class:`PortableRng` instead of a platform
RNG.  The generator is SplitMix64 run in counter mode: output ``i`` of a
stream seeded with ``s`` is ``mix64(s + (i + 1) * GOLDEN)``, so a stream is
a pure function of (seed, counter) and identical on every platform.

Uniforms take the top 53 bits of each word; normals come from the
Box-Muller pair transform applied to consecutive uniforms.
"""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)

_U53 = float(2.0**-53)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    return z ^ (z >> np.uint64(31))


class PortableRng:
    """SplitMix64 counter-mode stream with a fixed draw order."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def uint64(self, n: int) -> np.ndarray:
        """Next ``n`` raw 64-bit words of the stream."""
        if n < 0:
            raise ValueError("draw count must be nonnegative")
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        return _mix64(self._seed + idx * GOLDEN)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` float64 uniforms in [0, 1)."""
        return (self.uint64(n) >> np.uint64(11)).astype(np.float64) * _U53

    def uniform_open(self, n: int) -> np.ndarray:
        """``n`` float64 uniforms in (0, 1], safe as a log argument."""
        w = (self.uint64(n) >> np.uint64(11)) + np.uint64(1)
        return w.astype(np.float64) * _U53

    def normal(self, n: int) -> np.ndarray:
        """``n`` standard normals via Box-Muller on consecutive uniforms."""
        pairs = (n + 1) // 2
        u1 = self.uniform_open(pairs)
        u2 = self.uniform(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def spawn(self, key: int) -> "PortableRng":
        """Independent substream keyed by an integer (order-free seeding).

        Double-mixed so child seeds never coincide with this stream's own
        outputs.
        """
        word = np.array([key + 1], dtype=np.uint64)  # array ops wrap silently
        child_seed = _mix64(_mix64(self._seed + word * GOLDEN))[0]
        return PortableRng(int(child_seed))
