"""Undirected simple graphs on contiguous integer node IDs.

One representation serves the whole pipeline: the observed graph, every
sampled patch, and the synthetic output are all a node count plus a
canonical (min,max)-ordered duplicate-free edge array. Neighbor lists are
built once at construction as CSR-style arrays; everything downstream
(samplers, metric kernels, BFS) works off slices of those.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import InvalidNodeSet, ParseError


class Graph:
    """Immutable undirected simple graph on nodes 0..n-1.

    Edges are deduplicated and stored sorted as (u, v) with u < v.
    Self-loops are rejected; drop them before construction.
    """

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.n = n
        if isinstance(edges, np.ndarray):
            arr = edges.astype(np.int64, copy=False).reshape(-1, 2)
        else:
            listed = [tuple(e) for e in edges]
            arr = np.array(listed, dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("edge endpoint out of range")
            if (arr[:, 0] == arr[:, 1]).any():
                raise ValueError("self-loops are not allowed")
            lo = arr.min(axis=1)
            hi = arr.max(axis=1)
            # n <= ~1e6 keeps lo*n+hi comfortably inside int64
            codes = np.unique(lo * np.int64(n) + hi)
            arr = np.column_stack([codes // n, codes % n])
        else:
            arr = np.empty((0, 2), dtype=np.int64)
        self.edge_array = arr
        self.num_edges = int(arr.shape[0])

        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        order = np.lexsort((cols, rows))
        counts = np.bincount(rows, minlength=n) if rows.size else np.zeros(n, dtype=np.int64)
        self._indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self._nbrs = cols[order]
        self._csr = None
        self._edge_set = None

    @property
    def degrees(self):
        return np.diff(self._indptr)

    def degree(self, u):
        return int(self._indptr[u + 1] - self._indptr[u])

    def neighbors(self, u):
        """Sorted neighbor IDs of u (a view; do not mutate)."""
        return self._nbrs[self._indptr[u]:self._indptr[u + 1]]

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def edge_set(self):
        """Frozen set of (u, v) tuples with u < v (cached)."""
        if self._edge_set is None:
            self._edge_set = frozenset(map(tuple, self.edge_array.tolist()))
        return self._edge_set

    def to_csr(self):
        """Symmetric 0/1 adjacency as scipy CSR (cached)."""
        if self._csr is None:
            arr = self.edge_array
            rows = np.concatenate([arr[:, 0], arr[:, 1]])
            cols = np.concatenate([arr[:, 1], arr[:, 0]])
            data = np.ones(rows.size, dtype=np.int64)
            self._csr = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edge_array, other.edge_array)

    def __hash__(self):
        return hash((self.n, self.num_edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass
class LoadReport:
    """What load_edge_list cleaned up, for logging and sidecar files."""

    self_loops_dropped: int
    duplicates_collapsed: int
    id_map: np.ndarray | None  # original label per new index when relabel=True


def load_edge_list(lines, relabel=False):
    """Parse an edge-list text into (Graph, LoadReport).

    Format: one 'u v' pair per line, '#' comment lines ignored, optional
    first content line 'n=<int>' declaring the node count (which preserves
    trailing isolated nodes). Self-loops are dropped and counted; duplicate
    and reversed duplicate pairs collapse to one undirected edge, also
    counted. With relabel=True the distinct node labels are remapped to
    0..n-1 in sorted order and the original labels returned in the report.
    """
    header_n = None
    us = []
    vs = []
    self_loops = 0
    seen_content = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not seen_content and line.startswith("n="):
            seen_content = True
            try:
                header_n = int(line[2:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad node-count header {line!r}")
            if header_n < 0:
                raise ParseError(f"line {lineno}: negative node count")
            continue
        seen_content = True
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u = int(tokens[0])
            v = int(tokens[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer endpoint in {line!r}")
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: negative node ID in {line!r}")
        if u == v:
            self_loops += 1
            continue
        us.append(u)
        vs.append(v)

    pairs = np.column_stack([np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)]) \
        if us else np.empty((0, 2), dtype=np.int64)

    id_map = None
    if relabel:
        ids = np.unique(pairs)
        id_map = ids
        n = int(ids.size)
        pairs = np.searchsorted(ids, pairs)
    else:
        max_id = int(pairs.max()) if pairs.size else -1
        n = max_id + 1
        if header_n is not None:
            if header_n < n:
                raise ParseError(f"header n={header_n} smaller than max node ID {max_id}")
            n = header_n

    if pairs.size:
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        m_unique = np.unique(lo * np.int64(max(n, 1)) + hi).size
    else:
        m_unique = 0
    dupes = pairs.shape[0] - m_unique

    return Graph(n, pairs), LoadReport(self_loops, dupes, id_map)


def load_edge_list_file(path, relabel=False):
    with open(path, "r", encoding="utf-8") as fh:
        return load_edge_list(fh, relabel=relabel)


def save_edge_list(g, path):
    """Write g in the load_edge_list format (n= header keeps isolated nodes)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"n={g.n}\n")
        for u, v in g.edge_array.tolist():
            fh.write(f"{u} {v}\n")


def induced_subgraph(g, nodes):
    """Subgraph induced by `nodes`, relabeled to 0..k-1.

    Returns (sub, id_map) with id_map sorted ascending so that
    sub node i corresponds to g node id_map[i].
    """
    s = np.asarray(nodes, dtype=np.int64).ravel()
    if s.size == 0:
        raise InvalidNodeSet("node set must be non-empty")
    uniq = np.unique(s)
    if uniq.size != s.size:
        raise InvalidNodeSet("node set contains duplicates")
    s = uniq
    if s[0] < 0 or s[-1] >= g.n:
        raise InvalidNodeSet("node set member out of range")

    src = []
    dst = []
    for i, u in enumerate(s.tolist()):
        nb = g.neighbors(u)
        nb = nb[nb > u]
        if nb.size == 0:
            continue
        pos = np.searchsorted(s, nb)
        pos = np.minimum(pos, s.size - 1)
        ok = s[pos] == nb
        if ok.any():
            js = pos[ok]
            src.append(np.full(js.size, i, dtype=np.int64))
            dst.append(js)
    if src:
        edges = np.column_stack([np.concatenate(src), np.concatenate(dst)])
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return Graph(int(s.size), edges), s.copy()


def largest_connected_component(g):
    """Sorted node IDs of the largest component; ties break to the one
    containing the smallest node ID."""
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    _, labels = csgraph.connected_components(g.to_csr(), directed=False)
    sizes = np.bincount(labels)
    best = sizes.max()
    cand = np.flatnonzero(sizes == best)
    # first occurrence index of a label equals its smallest member
    _, first = np.unique(labels, return_index=True)
    label = cand[np.argmin(first[cand])]
    return np.flatnonzero(labels == label).astype(np.int64)


def is_connected(g):
    if g.n == 0:
        return True
    return largest_connected_component(g).size == g.n


def graph_summary(g):
    """(number of non-isolated nodes, number of edges)."""
    return int((g.degrees > 0).sum()), g.num_edges
