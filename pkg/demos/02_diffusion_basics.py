"""Walk through the discrete corruption process and its exact reversal.

Node states are parent-graph IDs, pair states are absent/present. Each
forward step keeps a state with probability alpha_t and otherwise resamples
it from the corpus marginal, so by t = T a sample is indistinguishable from
marginal noise. The reverse posterior is computed in closed form; at t = 1
it collapses onto the predicted clean distribution.
"""

import numpy as np

from graphstitch.diffusion import (build_schedule, forward_noise,
                                   posterior_step, prior_sample)
from graphstitch.sampling import build_corpus
from graphstitch.sbm import sbm_graph

graph = sbm_graph([30, 30], 0.2, 0.02, seed=1)
corpus = build_corpus(graph, "RW", k=8, d=3, seed=0)
sched = build_schedule(100, corpus)

print(f"schedule: T={sched.T}, alpha_bar[1]={sched.alpha_bar[1]:.6f}, "
      f"alpha_bar[T]={sched.alpha_bar[-1]:.2e}")

# corruption: fraction of node slots still holding their clean ID
sample = corpus[0]
for t in (1, 25, 50, 75, 100):
    kept = np.zeros(sample.num_nodes)
    for rep in range(200):
        noisy = forward_noise(sample, t, sched, seed=rep)
        kept += noisy.x_t == sample.id_map
    print(f"t={t:3d}: alpha_bar={sched.alpha_bar[t]:.4f}  "
          f"empirical keep rate {kept.mean() / 200:.4f}")

# the prior draw is pure marginal noise
prior = prior_sample(8, sched, seed=5)
print(f"\nprior sample edge fraction: {prior.e_t.mean():.3f} "
      f"(marginal m_E[present]={sched.m_e[1]:.3f})")

# a sharp prediction pins the t=1 posterior to the clean state
p_hat = np.full(graph.n, 1e-6)
p_hat[sample.id_map[0]] = 1.0
p_hat /= p_hat.sum()
post = posterior_step(int(prior.x_t[0]), p_hat, 1, sched, "node")
print(f"posterior mass on predicted ID at t=1: {post[sample.id_map[0]]:.6f}")
