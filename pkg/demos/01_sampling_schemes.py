"""Compare the three corpus samplers on one block-structured graph.

Unif draws k-node induced subgraphs uniformly; RW grows each sample with a
k-step random walk from every node (d walks per node); Ego halves a two-hop
neighborhood until it fits. The printout shows how the schemes trade node
coverage against edge density inside the samples.
"""

import numpy as np

from graphstitch.sampling import build_corpus, corpus_stats, required_sample_count
from graphstitch.sbm import sbm_graph

graph = sbm_graph([60, 60], 0.15, 0.01, seed=7)
print(f"parent graph: {graph.n} nodes, {graph.num_edges} edges")

# the Unif count comes from the coverage bound; RW and Ego emit n*d samples
need = required_sample_count(graph.n, k=12, delta=0.05)
print(f"uniform coverage bound at k=12, delta=0.05: {need} samples\n")

for scheme in ("Unif", "RW", "Ego"):
    corpus = build_corpus(graph, scheme, k=12, d=5, seed=0)
    stats = corpus_stats(corpus)
    sizes = np.array([s.num_nodes for s in corpus.samples])
    covered = len({int(i) for s in corpus.samples for i in s.id_map})
    print(f"{scheme:5s}: {stats['count']:5d} samples, "
          f"mean size {sizes.mean():5.2f} nodes, "
          f"mean edges {stats['mean_edges']:5.2f}, "
          f"edge density {stats['edge_density']:.3f}, "
          f"covers {covered}/{graph.n} nodes")
