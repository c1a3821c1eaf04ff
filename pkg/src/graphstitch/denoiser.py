"""Denoising network over noisy subgraph states, in plain numpy.

A compact message-passing network predicts, for every node slot, a
distribution over the parent graph's node IDs and, for every pair slot, a
present/absent distribution. Gradients are written out by hand; tanh
activations keep them smooth enough for finite-difference verification.
The heads' output layers start at zero so the untrained network predicts
the uniform distribution everywhere.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .diffusion import forward_noise
from .errors import InvalidParameter
from .rng import substream
from .sampling import local_pairs

TIME_FEATURES = 8

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class TrainConfig:
    steps: int
    batch: int = 32
    learning_rate: float = 3e-3
    lam: float = 8.0  # weight of the pair-state loss term
    h: int = 64
    L: int = 2
    seed: int = 0
    freeze_node_ids: bool = False

    def __post_init__(self):
        if self.steps < 0:
            raise InvalidParameter("steps must be >= 0")
        for name in ("batch", "h", "L"):
            if getattr(self, name) < 1:
                raise InvalidParameter(f"{name} must be >= 1")
        if self.learning_rate <= 0 or self.lam < 0:
            raise InvalidParameter("learning_rate must be > 0 and lam >= 0")


class DenoiserParams:
    """Named tensor bag with the layout baked into the keys."""

    def __init__(self, n, h, L, tensors, time_dim=TIME_FEATURES):
        self.n = n
        self.h = h
        self.L = L
        self.time_dim = time_dim
        self.tensors = tensors

    @classmethod
    def init(cls, n, h, L, seed, time_dim=TIME_FEATURES):
        rng = substream(seed, "denoiser-init")
        t = {}
        t["node_embed"] = rng.normal(0.0, 1.0 / math.sqrt(h), size=(n, h))
        t["time_w"] = rng.normal(0.0, 1.0 / math.sqrt(time_dim), size=(time_dim, h))
        t["time_b"] = np.zeros(h)
        for l in range(L):
            t[f"layer{l}.w_self"] = rng.normal(0.0, 1.0 / math.sqrt(h), size=(h, h))
            t[f"layer{l}.w_msg"] = rng.normal(0.0, 1.0 / math.sqrt(h), size=(h, h))
            t[f"layer{l}.w_ctx"] = rng.normal(0.0, 1.0 / math.sqrt(h), size=(h, h))
            t[f"layer{l}.b"] = np.zeros(h)
        # zero output layers: uniform predictions at initialization. The
        # edge head is a small MLP (a linear map of H_i + H_j cannot express
        # pairwise interactions); its hidden layer stays random so gradients
        # reach it once the output layer moves off zero.
        t["node_head_w"] = np.zeros((h, n))
        t["node_head_b"] = np.zeros(n)
        t["edge_head_w1"] = rng.normal(0.0, 1.0 / math.sqrt(2 * h + 2),
                                       size=(2 * h + 2, h))
        t["edge_head_b1"] = np.zeros(h)
        t["edge_head_w2"] = np.zeros((h, 2))
        t["edge_head_b2"] = np.zeros(2)
        return cls(n, h, L, t, time_dim)

    def zeros_like(self):
        return {k: np.zeros_like(v) for k, v in self.tensors.items()}

    def copy(self):
        return DenoiserParams(self.n, self.h, self.L,
                              {k: v.copy() for k, v in self.tensors.items()},
                              self.time_dim)

    def save(self, path):
        obj = {"version": 1, "n": self.n, "h": self.h, "L": self.L,
               "time_dim": self.time_dim,
               "tensors": {k: {"shape": list(v.shape), "data": v.ravel().tolist()}
                           for k, v in self.tensors.items()}}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if obj.get("version") != 1:
            raise InvalidParameter(f"unsupported checkpoint version {obj.get('version')!r}")
        tensors = {k: np.asarray(spec["data"], dtype=np.float64).reshape(spec["shape"])
                   for k, spec in obj["tensors"].items()}
        return cls(obj["n"], obj["h"], obj["L"], tensors, obj["time_dim"])


def _time_features(t, T):
    tau = t / T
    freqs = 2.0 ** np.arange(TIME_FEATURES // 2)
    ang = np.pi * tau * freqs
    return np.concatenate([np.sin(ang), np.cos(ang)])


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True) if z.size else z
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True) if z.size else e


def _forward(params, noisy, sched):
    t = params.tensors
    k = noisy.k
    feats = _time_features(noisy.t, sched.T)
    tv = feats @ t["time_w"] + t["time_b"]
    H = t["node_embed"][noisy.x_t] + tv[None, :]

    iu, ju = local_pairs(k)
    A = np.zeros((k, k))
    present = noisy.e_t == 1
    A[iu[present], ju[present]] = 1.0
    A[ju[present], iu[present]] = 1.0
    P = A / np.maximum(A.sum(axis=1), 1.0)[:, None]

    layers = []
    for l in range(params.L):
        H_in = H
        M = P @ H_in
        c = H_in.mean(axis=0)
        U = (H_in @ t[f"layer{l}.w_self"] + M @ t[f"layer{l}.w_msg"]
             + (c @ t[f"layer{l}.w_ctx"])[None, :] + t[f"layer{l}.b"])
        H = np.tanh(U)
        layers.append((H_in, M, c, H))

    logits_x = H @ t["node_head_w"] + t["node_head_b"]
    p_x = _softmax(logits_x)

    pf = np.zeros((iu.size, 2))
    pf[np.arange(iu.size), noisy.e_t.astype(np.int64)] = 1.0
    # symmetrized MLP head: score(i,j) + score(j,i)
    E1 = np.concatenate([H[iu], H[ju], pf], axis=1)
    E2 = np.concatenate([H[ju], H[iu], pf], axis=1)
    A1 = np.tanh(E1 @ t["edge_head_w1"] + t["edge_head_b1"])
    A2 = np.tanh(E2 @ t["edge_head_w1"] + t["edge_head_b1"])
    logits_e = (A1 + A2) @ t["edge_head_w2"] + 2.0 * t["edge_head_b2"]
    p_e = _softmax(logits_e)

    cache = {"feats": feats, "P": P, "layers": layers, "H_L": H,
             "iu": iu, "ju": ju, "E1": E1, "E2": E2, "A1": A1, "A2": A2,
             "p_x": p_x, "p_e": p_e, "x_t": noisy.x_t}
    return p_x, p_e, cache


def predict(params, noisy, sched):
    """(p_x, p_e): rows are distributions over node IDs / pair states."""
    if len(sched.m_x) != params.n:
        raise InvalidParameter("schedule and params disagree on parent size")
    p_x, p_e, _ = _forward(params, noisy, sched)
    return p_x, p_e


def loss(p_x, p_e, clean, lam):
    """Summed cross-entropy to the clean states; pair term weighted by lam."""
    targets = clean.id_map
    e_clean = clean.edge_states().astype(np.int64)
    node_term = -np.log(np.clip(p_x[np.arange(len(targets)), targets], 1e-30, None)).sum()
    if e_clean.size:
        edge_term = -np.log(np.clip(p_e[np.arange(len(e_clean)), e_clean], 1e-30, None)).sum()
    else:
        edge_term = 0.0
    return float(node_term + lam * edge_term)


def _backward(params, cache, clean, lam, grads):
    """Accumulate d loss / d params for one sample into `grads`."""
    t = params.tensors
    h = params.h
    k = len(cache["x_t"])
    H_L = cache["H_L"]
    iu, ju = cache["iu"], cache["ju"]

    targets = clean.id_map
    dZx = cache["p_x"].copy()
    dZx[np.arange(k), targets] -= 1.0
    grads["node_head_w"] += H_L.T @ dZx
    grads["node_head_b"] += dZx.sum(axis=0)
    dH = dZx @ t["node_head_w"].T

    if iu.size:
        e_clean = clean.edge_states().astype(np.int64)
        dZe = cache["p_e"].copy()
        dZe[np.arange(iu.size), e_clean] -= 1.0
        dZe *= lam
        A1, A2 = cache["A1"], cache["A2"]
        grads["edge_head_w2"] += (A1 + A2).T @ dZe
        grads["edge_head_b2"] += 2.0 * dZe.sum(axis=0)
        dA = dZe @ t["edge_head_w2"].T
        dU1 = dA * (1.0 - A1 ** 2)
        dU2 = dA * (1.0 - A2 ** 2)
        grads["edge_head_w1"] += cache["E1"].T @ dU1 + cache["E2"].T @ dU2
        grads["edge_head_b1"] += dU1.sum(axis=0) + dU2.sum(axis=0)
        dE1 = dU1 @ t["edge_head_w1"].T
        dE2 = dU2 @ t["edge_head_w1"].T
        np.add.at(dH, iu, dE1[:, :h] + dE2[:, h:2 * h])
        np.add.at(dH, ju, dE1[:, h:2 * h] + dE2[:, :h])

    P = cache["P"]
    for l in reversed(range(params.L)):
        H_in, M, c, H_out = cache["layers"][l]
        dU = dH * (1.0 - H_out ** 2)
        grads[f"layer{l}.w_self"] += H_in.T @ dU
        grads[f"layer{l}.w_msg"] += M.T @ dU
        dU_sum = dU.sum(axis=0)
        grads[f"layer{l}.w_ctx"] += np.outer(c, dU_sum)
        grads[f"layer{l}.b"] += dU_sum
        dc = dU_sum @ t[f"layer{l}.w_ctx"].T
        dH = dU @ t[f"layer{l}.w_self"].T + P.T @ (dU @ t[f"layer{l}.w_msg"].T) \
            + dc[None, :] / k

    np.add.at(grads["node_embed"], cache["x_t"], dH)
    dtv = dH.sum(axis=0)
    grads["time_w"] += np.outer(cache["feats"], dtv)
    grads["time_b"] += dtv


def _loss_and_grad(params, batch, sched, lam):
    """Mean loss over a batch of NoisySample (base = clean), plus gradients."""
    grads = params.zeros_like()
    total = 0.0
    for noisy in batch:
        p_x, p_e, cache = _forward(params, noisy, sched)
        total += loss(p_x, p_e, noisy.base, lam)
        _backward(params, cache, noisy.base, lam, grads)
    inv = 1.0 / len(batch)
    for key in grads:
        grads[key] *= inv
    return total * inv, grads


def grad(params, batch, sched, lam):
    """Parameter-shaped gradient of the mean batch loss."""
    _, grads = _loss_and_grad(params, batch, sched, lam)
    return grads


def train(corpus, sched, cfg):
    """Adam over noised corpus samples; returns (params, per-step loss trace).

    Fully deterministic: batch indices, timesteps, and corruption draws all
    come from substreams of cfg.seed keyed by step.
    """
    params = DenoiserParams.init(len(sched.m_x), cfg.h, cfg.L, cfg.seed)
    m = params.zeros_like()
    v = params.zeros_like()
    trace = np.zeros(cfg.steps)
    keys = sorted(params.tensors)
    for step in range(cfg.steps):
        rng = substream(cfg.seed, "train-step", step)
        idx = rng.integers(0, len(corpus), size=cfg.batch)
        ts = rng.integers(1, sched.T + 1, size=cfg.batch)
        batch = [forward_noise(corpus[int(i)], int(t), sched, rng,
                               freeze_nodes=cfg.freeze_node_ids)
                 for i, t in zip(idx, ts)]
        loss_val, grads = _loss_and_grad(params, batch, sched, cfg.lam)
        if not np.isfinite(loss_val):
            raise RuntimeError(f"non-finite loss {loss_val} at step {step}")
        trace[step] = loss_val
        b1c = 1.0 - ADAM_BETA1 ** (step + 1)
        b2c = 1.0 - ADAM_BETA2 ** (step + 1)
        for key in keys:
            g = grads[key]
            m[key] = ADAM_BETA1 * m[key] + (1.0 - ADAM_BETA1) * g
            v[key] = ADAM_BETA2 * v[key] + (1.0 - ADAM_BETA2) * g * g
            params.tensors[key] -= cfg.learning_rate * (m[key] / b1c) \
                / (np.sqrt(v[key] / b2c) + ADAM_EPS)
    return params, trace


def write_loss_csv(trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,loss\n")
        for i, val in enumerate(trace.tolist()):
            fh.write(f"{i},{val!r}\n")
