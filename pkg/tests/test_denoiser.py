import numpy as np
import pytest

from graphstitch.denoiser import (DenoiserParams, TrainConfig, grad, loss,
                                  predict, train, write_loss_csv,
                                  _loss_and_grad)
from graphstitch.diffusion import build_schedule, forward_noise, NoisySample
from graphstitch.errors import InvalidParameter
from graphstitch.graphs import Graph
from graphstitch.sampling import build_corpus, local_pairs


def toy_setup(T=12, n=6, h=5, L=2, seed=0):
    g = Graph(n, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
    corpus = build_corpus(g, "RW", k=3, d=2, seed=seed)
    sched = build_schedule(T, corpus)
    params = DenoiserParams.init(n, h, L, seed=seed)
    return corpus, sched, params


def noised_batch(corpus, sched, ts, seed=0):
    return [forward_noise(corpus[i % len(corpus)], t, sched, seed + i)
            for i, t in enumerate(ts)]


class TestPredict:
    def test_shapes_and_normalization(self):
        corpus, sched, params = toy_setup()
        noisy = forward_noise(corpus[0], 4, sched, seed=1)
        p_x, p_e = predict(params, noisy, sched)
        k = noisy.k
        assert p_x.shape == (k, 6)
        assert p_e.shape == (k * (k - 1) // 2, 2)
        assert np.allclose(p_x.sum(1), 1.0) and np.allclose(p_e.sum(1), 1.0)
        assert (p_x > 0).all() and (p_e > 0).all()

    def test_zero_heads_give_uniform(self):
        corpus, sched, _ = toy_setup()
        params = DenoiserParams.init(6, 4, 2, seed=3)
        noisy = forward_noise(corpus[0], 2, sched, seed=0)
        p_x, p_e = predict(params, noisy, sched)
        assert np.allclose(p_x, 1 / 6)
        assert np.allclose(p_e, 0.5)

    def test_single_node(self):
        corpus, sched, params = toy_setup()
        noisy = NoisySample(None, 3, np.array([2]), np.empty(0, dtype=np.int8))
        p_x, p_e = predict(params, noisy, sched)
        assert p_x.shape == (1, 6) and p_e.shape == (0, 2)

    def test_permutation_equivariance(self):
        corpus, sched, params = toy_setup()
        # train a few steps so outputs are not uniform
        params, _ = train(corpus, sched, TrainConfig(steps=5, batch=4, h=5,
                                                     L=2, seed=1))
        sample = max(corpus, key=lambda s: s.num_nodes)
        noisy = forward_noise(sample, 6, sched, seed=2)
        k = noisy.k
        iu, ju = local_pairs(k)
        pair_index = {(int(i), int(j)): idx
                      for idx, (i, j) in enumerate(zip(iu, ju))}
        perm = np.random.default_rng(5).permutation(k)

        e_perm = np.empty_like(noisy.e_t)
        for idx, (i, j) in enumerate(zip(iu.tolist(), ju.tolist())):
            a, b = int(perm[i]), int(perm[j])
            e_perm[idx] = noisy.e_t[pair_index[(min(a, b), max(a, b))]]
        permuted = NoisySample(None, noisy.t, noisy.x_t[perm], e_perm)

        p_x, p_e = predict(params, noisy, sched)
        q_x, q_e = predict(params, permuted, sched)
        assert np.allclose(q_x, p_x[perm], atol=1e-12)
        for idx, (i, j) in enumerate(zip(iu.tolist(), ju.tolist())):
            a, b = int(perm[i]), int(perm[j])
            orig = pair_index[(min(a, b), max(a, b))]
            assert np.allclose(q_e[idx], p_e[orig], atol=1e-12)


class TestLoss:
    def test_uniform_prediction_value(self):
        corpus, sched, _ = toy_setup()
        params = DenoiserParams.init(6, 4, 2, seed=0)
        sample = max(corpus, key=lambda s: s.num_nodes)
        noisy = forward_noise(sample, 3, sched, seed=0)
        p_x, p_e = predict(params, noisy, sched)
        lam = 2.5
        k = sample.num_nodes
        n_pairs = k * (k - 1) // 2
        expect = k * np.log(6) + lam * n_pairs * np.log(2)
        assert np.isclose(loss(p_x, p_e, sample, lam), expect, rtol=1e-12)

    def test_lambda_zero_drops_edge_term(self):
        corpus, sched, params = toy_setup()
        sample = corpus[0]
        noisy = forward_noise(sample, 2, sched, seed=1)
        p_x, p_e = predict(params, noisy, sched)
        node_only = loss(p_x, p_e, sample, 0.0)
        targets = sample.id_map
        expect = -np.log(p_x[np.arange(len(targets)), targets]).sum()
        assert np.isclose(node_only, expect, rtol=1e-12)


class TestGrad:
    def test_finite_differences(self):
        corpus, sched, _ = toy_setup(h=4, L=2)
        params = DenoiserParams.init(6, 4, 2, seed=7)
        # move off the zero-head saddle so head grads are generic
        rng = np.random.default_rng(8)
        for key in ("node_head_w", "node_head_b", "edge_head_w2", "edge_head_b2"):
            params.tensors[key] += rng.normal(0, 0.3, params.tensors[key].shape)
        batch = noised_batch(corpus, sched, ts=[1, 4, 9], seed=3)
        lam = 1.7
        analytic = grad(params, batch, sched, lam)

        def loss_at():
            return _loss_and_grad(params, batch, sched, lam)[0]

        eps = 1e-6
        worst = 0.0
        for key, tensor in params.tensors.items():
            flat = tensor.ravel()
            idxs = rng.choice(flat.size, size=min(5, flat.size), replace=False)
            for i in idxs:
                orig = flat[i]
                flat[i] = orig + eps
                up = loss_at()
                flat[i] = orig - eps
                down = loss_at()
                flat[i] = orig
                numeric = (up - down) / (2 * eps)
                a = analytic[key].ravel()[i]
                rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
                worst = max(worst, rel)
        assert worst < 1e-4

    def test_batch_grad_is_mean_of_singles(self):
        corpus, sched, params = toy_setup()
        batch = noised_batch(corpus, sched, ts=[2, 5], seed=1)
        g_all = grad(params, batch, sched, 1.0)
        g0 = grad(params, batch[:1], sched, 1.0)
        g1 = grad(params, batch[1:], sched, 1.0)
        for key in g_all:
            assert np.allclose(g_all[key], 0.5 * (g0[key] + g1[key]), atol=1e-12)

    def test_includes_single_node_sample(self):
        from graphstitch.sampling import SubgraphSample
        corpus, sched, params = toy_setup()
        base = SubgraphSample(Graph(1, []), np.array([3]), 6)
        singleton = NoisySample(base, 2, np.array([4]),
                                np.empty(0, dtype=np.int8))
        g = grad(params, [singleton], sched, 1.0)
        assert np.isfinite(g["node_embed"]).all()
        # zero-init heads: upstream grads vanish but the node head learns,
        # and with no pairs the edge head gets nothing
        assert np.count_nonzero(g["node_head_w"]) > 0
        assert not np.count_nonzero(g["edge_head_w2"])


class TestTrain:
    def test_zero_steps_returns_init(self):
        corpus, sched, _ = toy_setup()
        cfg = TrainConfig(steps=0, h=5, L=2, seed=4)
        params, trace = train(corpus, sched, cfg)
        init = DenoiserParams.init(6, 5, 2, seed=4)
        assert trace.size == 0
        for key in params.tensors:
            assert np.array_equal(params.tensors[key], init.tensors[key])

    def test_deterministic(self):
        corpus, sched, _ = toy_setup()
        cfg = TrainConfig(steps=8, batch=4, h=4, L=1, seed=2)
        p1, t1 = train(corpus, sched, cfg)
        p2, t2 = train(corpus, sched, cfg)
        assert np.array_equal(t1, t2)
        for key in p1.tensors:
            assert np.array_equal(p1.tensors[key], p2.tensors[key])

    def test_loss_decreases_on_tiny_problem(self):
        g = Graph(3, [(0, 1), (1, 2), (2, 0)])
        corpus = build_corpus(g, "Unif", k=3, count=4, seed=0)
        sched = build_schedule(8, corpus)
        cfg = TrainConfig(steps=150, batch=8, learning_rate=1e-2, h=8, L=1, seed=0)
        _, trace = train(corpus, sched, cfg)
        assert trace[-20:].mean() < trace[:20].mean()

    def test_validation(self):
        with pytest.raises(InvalidParameter):
            TrainConfig(steps=-1)
        with pytest.raises(InvalidParameter):
            TrainConfig(steps=1, batch=0)
        with pytest.raises(InvalidParameter):
            TrainConfig(steps=1, learning_rate=0)


class TestCheckpoint:
    def test_roundtrip_identical_predictions(self, tmp_path):
        corpus, sched, params = toy_setup()
        params, _ = train(corpus, sched, TrainConfig(steps=3, batch=2, h=5,
                                                     L=2, seed=0))
        path = tmp_path / "ckpt.json"
        params.save(path)
        back = DenoiserParams.load(path)
        noisy = forward_noise(corpus[0], 5, sched, seed=0)
        p1, e1 = predict(params, noisy, sched)
        p2, e2 = predict(back, noisy, sched)
        assert np.array_equal(p1, p2) and np.array_equal(e1, e2)

    def test_resave_byte_identical(self, tmp_path):
        _, _, params = toy_setup()
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        params.save(a)
        DenoiserParams.load(a).save(b)
        assert a.read_bytes() == b.read_bytes()

    def test_loss_csv(self, tmp_path):
        path = tmp_path / "loss.csv"
        write_loss_csv(np.array([1.5, 0.75]), path)
        lines = path.read_text().splitlines()
        assert lines[0] == "step,loss"
        assert len(lines) == 3 and lines[1].startswith("0,")
