"""Stochastic block model fixture for self-contained end-to-end runs."""

import numpy as np

from .errors import InvalidParameter
from .graphs import Graph
from .rng import substream


def block_labels(block_sizes):
    sizes = np.asarray(block_sizes, dtype=np.int64)
    if sizes.size == 0 or (sizes < 1).any():
        raise InvalidParameter("block sizes must be positive")
    return np.repeat(np.arange(sizes.size), sizes)


def sbm_graph(block_sizes, p_in, p_out, seed=0):
    """Per-pair Bernoulli SBM: p_in within a block, p_out across."""
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise InvalidParameter(f"edge probability {p} outside [0, 1]")
    labels = block_labels(block_sizes)
    n = labels.size
    iu, ju = np.triu_indices(n, k=1)
    probs = np.where(labels[iu] == labels[ju], p_in, p_out)
    keep = substream(seed, "sbm").random(iu.size) < probs
    return Graph(n, np.column_stack([iu[keep], ju[keep]]))
