"""
Module for providing the fixed, seedable pseudo random number generator used for every random draw in the package.

The generator is a counter based splitmix64 stream rather than a stateful xorshift generator: the only xorshift stage
is the xor-shift-multiply finalizer of splitmix64 applied to each counter value. Being counter based, blocks of words
can be produced with vectorised numpy `uint64` arithmetic while staying bit-exact across platforms:

- The 64-bit stream key is derived from the seed and a stream id with two splitmix64 steps:
  `key = splitmix64(splitmix64(seed) + stream)` (all arithmetic modulo 2^64).
- Word `i` (counting from 1) of the stream is `mix(key + i * 0x9E3779B97F4A7C15)` where `mix` is the splitmix64
  xor-shift-multiply finalizer:

      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
      z = (z ^ (z >> 27)) * 0x94D049BB133111EB
      z = z ^ (z >> 31)

- Uniform doubles in [0, 1) are `(word >> 11) * 2^-53`.
- Standard normals use the cosine branch of Box-Muller on two consecutive blocks of uniforms `u1`, `u2`:
  `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.
- Permutations are a stable argsort of a fresh block of words.
"""

import numpy as np
from numpy.typing import NDArray

MASK_64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULTIPLIER_1 = 0xBF58476D1CE4E5B9
MIX_MULTIPLIER_2 = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """
    Apply the splitmix64 finalizer to a single 64-bit integer.

    :param value: Integer to mix (only the lowest 64 bits are used).
    :return: Mixed 64-bit integer.
    """
    z = value & MASK_64
    z = ((z ^ (z >> 30)) * MIX_MULTIPLIER_1) & MASK_64
    z = ((z ^ (z >> 27)) * MIX_MULTIPLIER_2) & MASK_64
    return z ^ (z >> 31)


def splitmix64(state: int) -> tuple[int, int]:
    """
    Perform one step of the splitmix64 generator.

    :param state: Current generator state.
    :return: Tuple with
             - The next state.
             - The output word of this step.
    """
    state = (state + GOLDEN_GAMMA) & MASK_64
    return state, mix64(state)


class Prng:
    """
    Counter based splitmix64 stream generator.
    """

    def __init__(self, seed: int, stream: int = 0) -> None:
        """
        Initialise the generator for the given seed and stream id.

        :param seed: 64-bit seed (negative values are reduced modulo 2^64).
        :param stream: Id of an independent stream derived from the same seed (e.g. a fold or grid point index).
        """
        self.seed = seed
        self.stream = stream
        _, seed_word = splitmix64(seed & MASK_64)
        _, self._key = splitmix64((seed_word + stream) & MASK_64)
        self._counter = 0

    def spawn(self, stream: int) -> "Prng":
        """
        Create an independent generator for another stream of the same seed (the stream of `self` plays no part).

        :param stream: Id of the stream.
        :return: New generator starting at the beginning of that stream.
        """
        return Prng(self.seed, stream)

    def words(self, count: int) -> NDArray[np.uint64]:
        """
        Draw the next block of raw 64-bit words.

        :param count: Number of words to draw.
        :return: Array of `count` words.
        """
        counters = np.arange(self._counter + 1, self._counter + count + 1, dtype=np.uint64)
        self._counter += count
        z = np.uint64(self._key) + counters * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_MULTIPLIER_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_MULTIPLIER_2)
        return z ^ (z >> np.uint64(31))

    def random(self, size: int | tuple[int, ...] = ()) -> NDArray[np.float64]:
        """
        Draw uniform doubles in [0, 1).

        :param size: Shape of the output.
        :return: Array of uniform values.
        """
        shape = (size,) if isinstance(size, int) else tuple(size)
        count = int(np.prod(shape, dtype=np.int64))
        values = (self.words(count) >> np.uint64(11)).astype(np.float64) * (2.0**-53)
        return values.reshape(shape)

    def uniform(self, low: float, high: float, size: int | tuple[int, ...] = ()) -> NDArray[np.float64]:
        """
        Draw uniform doubles in [low, high).

        :param low: Lower bound.
        :param high: Upper bound.
        :param size: Shape of the output.
        :return: Array of uniform values.
        """
        return low + (high - low) * self.random(size)

    def normal(self, size: int | tuple[int, ...] = ()) -> NDArray[np.float64]:
        """
        Draw standard normal values.

        :param size: Shape of the output.
        :return: Array of normal values.
        """
        u1 = self.random(size)
        u2 = self.random(size)
        return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)

    def permutation(self, count: int) -> NDArray[np.int64]:
        """
        Draw a random permutation of `range(count)`.

        :param count: Number of elements.
        :return: Permuted indices.
        """
        return np.argsort(self.words(count), kind="stable").astype(np.int64)
