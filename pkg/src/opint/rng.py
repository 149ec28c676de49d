"""Counter-based SplitMix64 generator with Box-Muller Gaussians.

Word ``i`` of the stream seeded with ``s`` is ``mix64(s + (i + 1) * GOLDEN)``
where ``mix64`` is the SplitMix64 finalizer. Uniform doubles take the top 53
bits. Gaussians use Box-Muller on consecutive word pairs, cosine branch
first. The stream is fully determined by (seed, counter), so it can be
reproduced in any language with 64-bit unsigned arithmetic.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class CounterRNG:
    """Deterministic stream of 64-bit words indexed by a counter."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self.counter = 0

    def substream(self, index: int) -> "CounterRNG":
        # per-trial substreams are keyed by seed + index
        return CounterRNG((self.seed + int(index)) & _MASK)

    def words(self, size: int) -> np.ndarray:
        idx = np.arange(self.counter + 1, self.counter + 1 + size, dtype=np.uint64)
        self.counter += size
        with np.errstate(over="ignore"):
            return mix64(np.uint64(self.seed) + idx * GOLDEN)

    def uniform(self, size=None) -> np.ndarray:
        shape = () if size is None else np.atleast_1d(size)
        count = int(np.prod(shape)) if size is not None else 1
        u = (self.words(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return u.reshape(tuple(shape)) if size is not None else u[0]

    def normal(self, size=None) -> np.ndarray:
        shape = () if size is None else tuple(np.atleast_1d(size))
        count = int(np.prod(shape)) if size is not None else 1
        pairs = (count + 1) // 2
        w = self.words(2 * pairs)
        u1 = ((w[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53  # in (0, 1]
        u2 = (w[1::2] >> np.uint64(11)).astype(np.float64) * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(2 * np.pi * u2)
        z[1::2] = r * np.sin(2 * np.pi * u2)
        z = z[:count]
        return z.reshape(shape) if size is not None else z[0]

    def complex_normal(self, shape) -> np.ndarray:
        z = self.normal((2,) + tuple(np.atleast_1d(shape)))
        return (z[0] + 1j * z[1]) / np.sqrt(2.0)

    def hermitian(self, n: int, scale: float = 1.0) -> np.ndarray:
        """GUE-type Hermitian matrix with entries of variance ~ scale^2 / n."""
        X = self.complex_normal((n, n))
        return scale * (X + X.conj().T) / (2.0 * np.sqrt(n))

    def unitary(self, n: int) -> np.ndarray:
        from .matcore import hermitian_eig

        return np.array(hermitian_eig(self.hermitian(n)).basis)

    def integers(self, low: int, high: int, size=None):
        u = self.uniform(size)
        return (low + np.floor(u * (high - low))).astype(int)
