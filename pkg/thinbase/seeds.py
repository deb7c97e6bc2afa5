"""
Seeded random substreams.  A run has a single 64 bit master seed, every random draw comes from a
generator keyed by (master seed, *keys), so attempt k of a sampler or chunk i of a word image sees
the same numbers regardless of how work is spread over threads.
"""

from typing import Union

import numpy

Key = Union[int, numpy.integer]


def substream(seed: int, *keys: Key) -> numpy.random.Generator:
    sequence = numpy.random.SeedSequence(int(seed), spawn_key=tuple(int(key) for key in keys))
    return numpy.random.Generator(numpy.random.PCG64(sequence))


def partial_shuffle(rng: numpy.random.Generator, items: numpy.ndarray, count: int) -> numpy.ndarray:
    """
    Uniform count-subset of items by a partial Fisher-Yates shuffle.  Taking a prefix of a longer
    draw from an identically seeded generator gives the shorter draw.
    """
    pool = numpy.array(items, copy=True)
    size = len(pool)
    for i in range(count):
        j = int(rng.integers(i, size))
        pool[i], pool[j] = pool[j], pool[i]

    return pool[:count]
