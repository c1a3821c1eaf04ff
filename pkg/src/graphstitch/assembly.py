"""Stitch generated subgraphs into one synthetic graph by edge union.

Subgraphs come out of the reverse diffusion chain carrying original node
IDs, so assembly is just set union over translated edges: keep generating
until the union reaches the target edge count, always inserting the whole
final subgraph (bounded overshoot), and abort if a long run of subgraphs
contributes nothing new.
"""

from dataclasses import dataclass, field

import numpy as np

from .diffusion import prior_sample, reverse_step
from .denoiser import predict
from .errors import InvalidParameter, StalledAssembly
from .graphs import Graph
from .rng import as_generator, substream
from .sampling import SubgraphSample, local_pairs

STALL_LIMIT = 50


@dataclass
class SynthAccumulator:
    """Running state of an assembly pass."""

    n: int
    edge_set: set = field(default_factory=set)
    subgraphs_used: int = 0
    overshoot: int = 0

    @property
    def num_edges(self):
        return len(self.edge_set)

    def to_graph(self):
        return Graph(self.n, sorted(self.edge_set))


def generate_subgraph(params, sched, k, seed):
    """Run the reverse chain from a prior draw down to t=0 and decode.

    Node slots that sampled the same parent ID are merged; pair states
    that became self-pairs under the merge are dropped.
    """
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    rng = as_generator(seed)
    noisy = prior_sample(k, sched, rng)
    while noisy.t > 0:
        p_x, p_e = predict(params, noisy, sched)
        noisy = reverse_step(noisy, p_x, p_e, sched, rng)

    ids = noisy.x_t
    uniq = np.unique(ids)
    remap = np.searchsorted(uniq, ids)
    iu, ju = local_pairs(k)
    present = noisy.e_t == 1
    a = remap[iu[present]]
    b = remap[ju[present]]
    keep = a != b
    edges = np.column_stack([a[keep], b[keep]])
    return SubgraphSample(Graph(int(uniq.size), edges), uniq, params.n)


def _union_loop(make_subgraph, n, thresholds, stall_limit=STALL_LIMIT):
    """Generate-and-union until the last threshold is reached.

    Returns (snapshots, acc): one edge-set snapshot per threshold, taken
    the first time the union size crosses it (a single subgraph may cross
    several). Raises StalledAssembly after `stall_limit` consecutive
    subgraphs that add no new edge.
    """
    acc = SynthAccumulator(n)
    snapshots = []
    pending = list(thresholds)
    streak = 0
    while pending:
        sub = make_subgraph(acc.subgraphs_used)
        acc.subgraphs_used += 1
        ea = sub.id_map[sub.local.edge_array]
        before = acc.num_edges
        acc.edge_set.update(zip(ea[:, 0].tolist(), ea[:, 1].tolist()))
        streak = 0 if acc.num_edges > before else streak + 1
        while pending and acc.num_edges >= pending[0]:
            snapshots.append(frozenset(acc.edge_set))
            pending.pop(0)
        if pending and streak >= stall_limit:
            raise StalledAssembly(
                f"{stall_limit} consecutive subgraphs added no new edges "
                f"({acc.num_edges}/{pending[-1]} edges after "
                f"{acc.subgraphs_used} subgraphs)",
                edges=acc.num_edges, subgraphs_used=acc.subgraphs_used)
    acc.overshoot = acc.num_edges - thresholds[-1]
    return snapshots, acc


def assemble(params, sched, target_edges, k, seed, stall_limit=STALL_LIMIT):
    """Union generated subgraphs until >= target_edges; returns (Graph, acc).

    Overshoot is bounded by k*(k-1)/2 - 1 since the final subgraph is
    inserted whole.
    """
    if target_edges < 1:
        raise InvalidParameter("target_edges must be >= 1")

    def make(i):
        return generate_subgraph(params, sched, k, substream(seed, "assemble", i))

    _, acc = _union_loop(make, params.n, [target_edges], stall_limit)
    return acc.to_graph(), acc


def progressive_assemble(params, sched, fractions, total_edges, k, seed,
                         stall_limit=STALL_LIMIT):
    """Snapshots of the growing union at ceil(f * total_edges) for each f.

    fractions must be strictly increasing within (0, 1]. Returns
    [(fraction, Graph), ...] in order; the underlying run is a single
    assembly pass, so later snapshots are supersets of earlier ones.
    """
    fr = [float(f) for f in fractions]
    if not fr or any(not 0.0 < f <= 1.0 for f in fr) or any(
            b <= a for a, b in zip(fr, fr[1:])):
        raise InvalidParameter("fractions must be strictly increasing in (0, 1]")
    if total_edges < 1:
        raise InvalidParameter("total_edges must be >= 1")
    thresholds = [max(1, int(np.ceil(f * total_edges))) for f in fr]

    def make(i):
        return generate_subgraph(params, sched, k, substream(seed, "assemble", i))

    snapshots, _ = _union_loop(make, params.n, thresholds, stall_limit)
    return [(f, Graph(params.n, sorted(s))) for f, s in zip(fr, snapshots)]
