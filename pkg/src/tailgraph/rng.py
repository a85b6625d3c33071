"""Counter-based random-number streams.

Every stochastic routine takes an integer seed and derives independent
Philox streams as ``key = master_seed * 2**64 + stream_id``.  A stream id
is a pure function of purpose (e.g. the row-block index of a sampler, or
a fixed offset for quadrature shifts), never of execution order, so
results are independent of worker count and identical across runs.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# Fixed stream-id offsets; samplers use ids below OFFSET_QUAD for their
# row blocks.
OFFSET_QUAD = 1 << 32  # quadrature randomization
OFFSET_LATENT = 1 << 33  # finite-level simulator blocks
OFFSET_MISC = 1 << 34

#: Row-block length used by all samplers; block k of a run uses stream k.
BLOCK = 1 << 15


def derived_rng(seed: int, stream: int) -> np.random.Generator:
    """Generator for the given (seed, stream) pair."""
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    if not 0 <= stream <= MASK64:
        raise ValueError(f"stream id must fit in 64 bits, got {stream}")
    return np.random.Generator(np.random.Philox(key=(seed << 64) | stream))


def block_bounds(n: int) -> list[tuple[int, int, int]]:
    """(block index, start, stop) triples covering range(n)."""
    return [(k, s, min(s + BLOCK, n)) for k, s in enumerate(range(0, n, BLOCK))]
