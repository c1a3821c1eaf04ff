"""Subgraph corpus construction from a single parent graph.

Three schemes produce small node-ID-labeled patches of the observation:
uniform k-subsets, random-walk visit sets, and pruned 2-hop ego
neighborhoods. Samples keep original node IDs (via id_map) so a generator
trained on the corpus can later be stitched back into a full graph.
"""

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameter
from .graphs import Graph, induced_subgraph, largest_connected_component
from .rng import substream

SCHEMES = ("Unif", "RW", "Ego")
UNIF_CAP = 10000  # default ceiling on uniform corpus size; the coverage bound is loose


@lru_cache(maxsize=64)
def local_pairs(k):
    """Row-major upper-triangle pair indices (i, j), i < j, for k nodes."""
    iu, ju = np.triu_indices(k, k=1)
    iu.setflags(write=False)
    ju.setflags(write=False)
    return iu, ju


@dataclass
class SubgraphSample:
    """A patch of the parent graph: local structure + original node IDs."""

    local: Graph
    id_map: np.ndarray  # sorted original IDs, len == local.n
    n_parent: int

    def __post_init__(self):
        if self.local.n != len(self.id_map):
            raise ValueError("id_map length must match local node count")

    @property
    def num_nodes(self):
        return self.local.n

    def edge_states(self):
        """0/1 state per local (i, j) pair in local_pairs order."""
        k = self.local.n
        iu, ju = local_pairs(k)
        adj = np.zeros((k, k), dtype=bool)
        ea = self.local.edge_array
        adj[ea[:, 0], ea[:, 1]] = True
        return adj[iu, ju].astype(np.int8)


@dataclass
class SampleCorpus:
    samples: list
    scheme: str
    k: int
    d: int | None

    @property
    def n_parent(self):
        return self.samples[0].n_parent

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def __iter__(self):
        return iter(self.samples)


def required_sample_count(n, k, delta, constant=1.0):
    """Coverage-style bound on how many uniform k-subsets to draw.

    ceil(C * (n/k)^2 * ln(n) * ln(1/delta)); at least 1. Deliberately loose
    for real graphs, hence the UNIF_CAP default in build_corpus.
    """
    if not 1 <= k <= n:
        raise InvalidParameter(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must be in (0, 1), got {delta}")
    if constant <= 0:
        raise InvalidParameter("constant must be positive")
    value = constant * (n / k) ** 2 * math.log(n) * math.log(1.0 / delta)
    return max(1, math.ceil(value))


def sample_uniform(g, k, count, seed=0):
    """`count` induced subgraphs on uniformly chosen k-subsets of nodes."""
    if not 1 <= k <= g.n:
        raise InvalidParameter(f"need 1 <= k <= n, got k={k}, n={g.n}")
    if count < 1:
        raise InvalidParameter("count must be >= 1")
    samples = []
    for i in range(count):
        rng = substream(seed, "unif", i)
        ids = rng.choice(g.n, size=k, replace=False)
        sub, id_map = induced_subgraph(g, ids)
        samples.append(SubgraphSample(sub, id_map, g.n))
    return SampleCorpus(samples, "Unif", k, None)


def sample_random_walk(g, k, d, seed=0):
    """d walks of k edge-traversals from every node; the sample is the
    subgraph induced on the visited set (<= k+1 distinct nodes).

    An isolated start node yields a singleton sample.
    """
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    if d < 1:
        raise InvalidParameter("d must be >= 1")
    samples = []
    for v in range(g.n):
        for rep in range(d):
            rng = substream(seed, "rw", v, rep)
            cur = v
            visited = {v}
            for _ in range(k):
                nb = g.neighbors(cur)
                if nb.size == 0:
                    break
                cur = int(nb[rng.integers(nb.size)])
                visited.add(cur)
            sub, id_map = induced_subgraph(g, sorted(visited))
            samples.append(SubgraphSample(sub, id_map, g.n))
    return SampleCorpus(samples, "RW", k, d)


def two_hop_neighborhood(g, v):
    """Sorted node IDs of the closed 2-hop neighborhood of v."""
    n1 = g.neighbors(v)
    parts = [np.array([v], dtype=np.int64), n1]
    for u in n1.tolist():
        parts.append(g.neighbors(u))
    return np.unique(np.concatenate(parts))


def sample_ego(g, k, d, seed=0):
    """d pruned 2-hop ego samples per node.

    Start from the closed 2-hop neighborhood; while it has more than k
    nodes, delete floor(|V|/2) uniformly chosen nodes and keep the largest
    connected component of what remains. Output is always connected and
    has at most k nodes (or is the full 2-hop set when already small).
    """
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    if d < 1:
        raise InvalidParameter("d must be >= 1")
    samples = []
    for v in range(g.n):
        for rep in range(d):
            rng = substream(seed, "ego", v, rep)
            nodes = two_hop_neighborhood(g, v)
            while nodes.size > k:
                drop = rng.choice(nodes.size, size=nodes.size // 2, replace=False)
                keep = np.delete(nodes, drop)
                sub, id_map = induced_subgraph(g, keep)
                nodes = id_map[largest_connected_component(sub)]
            sub, id_map = induced_subgraph(g, nodes)
            samples.append(SubgraphSample(sub, id_map, g.n))
    return SampleCorpus(samples, "Ego", k, d)


def build_corpus(g, scheme, k, d=5, count=None, delta=0.05, seed=0,
                 coverage_constant=1.0, max_count=UNIF_CAP):
    """Sample a training corpus and shuffle it with a seeded permutation.

    Unif takes `count` samples (default: coverage bound capped at
    max_count); RW and Ego take d samples per node.
    """
    name = {"unif": "Unif", "uniform": "Unif", "rw": "RW",
            "random_walk": "RW", "ego": "Ego"}.get(str(scheme).lower())
    if name is None:
        raise InvalidParameter(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if name == "Unif":
        if count is None:
            count = required_sample_count(g.n, k, delta, coverage_constant)
            if max_count is not None:
                count = min(count, max_count)
        corpus = sample_uniform(g, k, count, seed=seed)
    elif name == "RW":
        corpus = sample_random_walk(g, k, d, seed=seed)
    else:
        corpus = sample_ego(g, k, d, seed=seed)
    perm = substream(seed, "shuffle").permutation(len(corpus))
    corpus.samples = [corpus.samples[i] for i in perm]
    return corpus


def sample_to_obj(sample):
    return {"ids": sample.id_map.tolist(),
            "edges": sample.local.edge_array.tolist()}


def sample_from_obj(obj, n_parent):
    ids = np.asarray(obj["ids"], dtype=np.int64)
    local = Graph(len(ids), obj["edges"])
    return SubgraphSample(local, ids, n_parent)


def write_corpus_jsonl(corpus, path):
    """One sample per line: {"edges": [[i,j],...], "ids": [...]}."""
    with open(path, "w", encoding="utf-8") as fh:
        for sample in corpus:
            fh.write(json.dumps(sample_to_obj(sample), sort_keys=True,
                                separators=(",", ":")))
            fh.write("\n")


def read_corpus_jsonl(path, n_parent, scheme, k, d=None):
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                samples.append(sample_from_obj(json.loads(line), n_parent))
    return SampleCorpus(samples, scheme, k, d)


def corpus_stats(corpus):
    """Sidecar payload: enough metadata to reload the corpus + summaries."""
    sizes = np.array([s.num_nodes for s in corpus], dtype=np.int64)
    edges = np.array([s.local.num_edges for s in corpus], dtype=np.int64)
    pairs = sizes * (sizes - 1) // 2
    hist = np.bincount(sizes)
    total_pairs = int(pairs.sum())
    return {
        "count": len(corpus),
        "scheme": corpus.scheme,
        "k": corpus.k,
        "d": corpus.d,
        "n_parent": corpus.n_parent,
        "size_histogram": {str(sz): int(c) for sz, c in enumerate(hist) if c},
        "edge_density": (float(edges.sum()) / total_pairs) if total_pairs else 0.0,
        "mean_edges": float(edges.mean()) if len(corpus) else 0.0,
    }
