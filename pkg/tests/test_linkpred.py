import itertools

import numpy as np
import pytest

from graphstitch.errors import InvalidParameter, NegativeSamplingExhausted
from graphstitch.graphs import Graph
from graphstitch.linkpred import (average_precision, build_eval_set, evaluate,
                                  ranking_auc, train_link_predictor,
                                  EmbeddingModel, _sample_non_edges)
from graphstitch.rng import substream
from graphstitch.sbm import sbm_graph


def auc_oracle(pos, neg):
    wins = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1.0
            elif p == q:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def ap_oracle(pos, neg):
    """Walk the descending ranking, averaging precision at positive hits;
    ties handled by threshold grouping (score >= threshold retrieved)."""
    thresholds = sorted(set(pos) | set(neg), reverse=True)
    best = []
    prev_recall = 0.0
    total = 0.0
    for thr in thresholds:
        tp = sum(1 for s in pos if s >= thr)
        fp = sum(1 for s in neg if s >= thr)
        recall = tp / len(pos)
        total += (recall - prev_recall) * (tp / (tp + fp))
        prev_recall = recall
    return total


class TestRankingMetrics:
    def test_hand_example(self):
        pos = [0.9, 0.4]
        neg = [0.6, 0.1]
        assert np.isclose(ranking_auc(pos, neg), 0.75, atol=1e-12)
        assert np.isclose(average_precision(pos, neg), 5 / 6, atol=1e-12)

    def test_perfect_and_inverted(self):
        assert ranking_auc([0.9, 0.8], [0.2, 0.1]) == 1.0
        assert ranking_auc([0.1, 0.2], [0.8, 0.9]) == 0.0
        assert average_precision([0.9, 0.8], [0.2, 0.1]) == 1.0

    def test_all_tied(self):
        pos = [0.5] * 4
        neg = [0.5] * 6
        assert ranking_auc(pos, neg) == 0.5
        assert np.isclose(average_precision(pos, neg), 0.4, atol=1e-12)

    def test_random_vs_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            # duplicate-heavy scores to stress tie handling
            pos = rng.integers(0, 6, size=rng.integers(1, 10)) / 5.0
            neg = rng.integers(0, 6, size=rng.integers(1, 10)) / 5.0
            assert np.isclose(ranking_auc(pos, neg),
                              auc_oracle(pos.tolist(), neg.tolist()), atol=1e-12)
            assert np.isclose(average_precision(pos, neg),
                              ap_oracle(pos.tolist(), neg.tolist()), atol=1e-12)


class TestEvalSet:
    def test_counts_and_disjointness(self):
        g = sbm_graph([15, 15], 0.4, 0.05, seed=1)
        ev = build_eval_set(g, 0.9, seed=3)
        expect = int(np.ceil(0.9 * g.num_edges))
        assert ev.positives.shape == (expect, 2)
        assert ev.negatives.shape == (expect, 2)
        es = g.edge_set()
        for u, v in ev.positives.tolist():
            assert (min(u, v), max(u, v)) in es
        negs = {(min(u, v), max(u, v)) for u, v in ev.negatives.tolist()}
        assert len(negs) == expect
        assert not negs & es

    def test_deterministic(self):
        g = sbm_graph([10, 10], 0.5, 0.1, seed=0)
        a = build_eval_set(g, 0.5, seed=7)
        b = build_eval_set(g, 0.5, seed=7)
        assert np.array_equal(a.positives, b.positives)
        assert np.array_equal(a.negatives, b.negatives)

    def test_validation(self):
        g = Graph(4, [(0, 1)])
        with pytest.raises(InvalidParameter):
            build_eval_set(g, 0.0, seed=0)
        with pytest.raises(InvalidParameter):
            build_eval_set(Graph(4), 0.5, seed=0)

    def test_dense_graph_exhausts(self):
        # complete graph: no non-edges to find
        g = Graph(5, list(itertools.combinations(range(5), 2)))
        with pytest.raises(NegativeSamplingExhausted):
            _sample_non_edges(g, 1, substream(0, "x"), budget=2000)


class TestTraining:
    def test_loss_decreases(self):
        g = sbm_graph([12, 12], 0.5, 0.05, seed=2)
        _, trace = train_link_predictor(g, h=8, epochs=60, lr=0.1, seed=0)
        assert trace[-5:].mean() < trace[:5].mean()

    def test_deterministic(self):
        g = sbm_graph([10, 10], 0.4, 0.05, seed=5)
        m1, t1 = train_link_predictor(g, h=4, epochs=10, seed=1)
        m2, t2 = train_link_predictor(g, h=4, epochs=10, seed=1)
        assert np.array_equal(m1.z, m2.z) and m1.bias == m2.bias
        assert np.array_equal(t1, t2)

    def test_zero_epochs(self):
        g = Graph(4, [(0, 1), (2, 3)])
        model, trace = train_link_predictor(g, h=3, epochs=0, seed=0)
        assert trace.size == 0 and model.z.shape == (4, 3)

    def test_validation(self):
        with pytest.raises(InvalidParameter):
            train_link_predictor(Graph(3), h=2, epochs=1)
        with pytest.raises(InvalidParameter):
            train_link_predictor(Graph(3, [(0, 1)]), h=0)


class TestEvaluate:
    def test_block_structure_learned(self):
        # predictor trained on one SBM draw should rank held-out edges of
        # the same communities above non-edges
        real = sbm_graph([20, 20], 0.45, 0.03, seed=10)
        model, _ = train_link_predictor(real, h=8, epochs=400, lr=0.5, seed=0)
        ev = build_eval_set(real, 0.5, seed=4)
        auc, ap = evaluate(model, ev)
        assert auc > 0.7
        assert ap > 0.6

    def test_random_model_near_half(self):
        real = sbm_graph([20, 20], 0.4, 0.05, seed=3)
        rng = np.random.default_rng(0)
        model = EmbeddingModel(rng.normal(0, 0.01, size=(40, 8)), 0.0)
        ev = build_eval_set(real, 0.9, seed=1)
        auc, _ = evaluate(model, ev)
        assert abs(auc - 0.5) < 0.15

    def test_scores_shape(self):
        model = EmbeddingModel(np.eye(3), 0.0)
        s = model.scores([(0, 1), (1, 1)])
        assert s.shape == (2,)
        assert np.isclose(s[0], 0.5) and s[1] > 0.5
