"""
Seeded random streams.

Every stochastic component draws from its own generator derived from one
master seed, so adding draws in one component never shifts another.
"""

import numpy as np

STREAMS = {
    "trace": 0,
    "init": 1,
    "shuffle": 2,
    "split": 3,
    "refresh": 4,
    "permutation": 5,
}


def make_rng(seed: int, stream: str, *keys: int) -> np.random.Generator:
    """
    Create the generator for a named stream.

    Args:
        seed: Master seed
        stream: Stream name, one of STREAMS
        *keys: Optional further integers identifying a sub-stream (e.g. an epoch)

    Returns:
        A numpy Generator independent from every other stream of the same seed

    Raises:
        KeyError: If the stream name is unknown
    """
    spawn_key = (STREAMS[stream],) + tuple(int(k) for k in keys)
    sequence = np.random.SeedSequence(int(seed), spawn_key=spawn_key)
    return np.random.Generator(np.random.PCG64(sequence))
