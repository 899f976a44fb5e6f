"""Named random streams derived from a single top-level seed.

Every stochastic step in the package draws from its own stream so that one
seed reproduces an entire run regardless of execution order.
"""

import numpy as np

# Stable stream ids; never renumber, only append.
_STREAMS = {
    "split": 1,
    "train": 2,
    "randomize": 3,
    "synthesize": 4,
    "fixture": 5,
}


def stream_rng(seed: int, stream: str, *key: int) -> np.random.Generator:
    """Generator for the named stream, optionally sub-keyed (e.g. tree index)."""
    try:
        sid = _STREAMS[stream]
    except KeyError:
        raise ValueError(f"unknown random stream {stream!r}") from None
    return np.random.default_rng([int(seed), sid, *map(int, key)])
