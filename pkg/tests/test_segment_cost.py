import numpy as np
import pytest

from plli import Dataset, FitConfig, build_prefix_oracle, fit_constant, segment_cost, segment_slice, sort_by_target
from plli.exceptions import IndexOutOfRange, InvertedRange
from plli.segment_cost import SegmentCoster

from oracles import best_kmeans_1d_points, sad, sse


def _sd(X, y):
    return sort_by_target(Dataset(np.asarray(X, dtype=float).reshape(len(y), -1), y, None, None))


class TestSlice:
    def test_single_and_whole(self):
        sd = _sd([[1], [2], [3]], [3, 1, 2])
        X, y = segment_slice(sd, 0, 0)
        assert y.tolist() == [1] and X.tolist() == [[2]]
        X, y = segment_slice(sd, 0, 2)
        assert y.tolist() == [1, 2, 3]

    def test_inverted(self):
        with pytest.raises(InvertedRange):
            segment_slice(_sd([[1], [2], [3]], [1, 2, 3]), 2, 1)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            segment_slice(_sd([[1], [2]], [1, 2]), 0, 2)


class TestSegmentCost:
    def test_constant_pair(self):
        rec = segment_cost(_sd([[0], [1]], [0, 1]), 0, 1, FitConfig(H=1, W=1, model_family="constant"))
        assert rec.cost == 0.5

    def test_linear_collinear(self):
        rec = segment_cost(_sd([[0], [1], [2]], [1, 3, 5]), 0, 2, FitConfig(H=1, W=1))
        assert rec.cost < 1e-18

    def test_two_regions_brute_force(self):
        vals = [0.0, 1.0, 10.0, 11.0]
        rec = segment_cost(_sd([[v] for v in vals], vals), 0, 3, FitConfig(H=1, W=2, model_family="constant"))
        assert rec.cost == best_kmeans_1d_points(vals, 2) == 1.0
        assert rec.effective_w == 2
        assert rec.cost == sum(fit_constant([v for v in vals if (v > 5) == hi]).cost for hi in (False, True))

    def test_cost_is_sum_of_fits(self, rng):
        from plli import fit_linear, kmeans
        from plli.segment_cost import segment_seed

        sd = _sd(rng.normal(size=(60, 2)), rng.normal(size=60))
        cfg = FitConfig(H=1, W=3, seed=4)
        rec = segment_cost(sd, 5, 50, cfg)
        X, y = segment_slice(sd, 5, 50)
        km = kmeans(X, 3, seed=segment_seed(4, 5, 50))
        total = 0.0
        for c in range(km.effective_k):
            m = km.assignment == c
            total += fit_linear(X[m], y[m]).cost
        assert rec.cost == total
        assert sum(rec.sizes) == 46 and min(rec.sizes) > 0

    def test_deterministic(self, rng):
        sd = _sd(rng.normal(size=(40, 2)), rng.normal(size=40))
        cfg = FitConfig(H=1, W=2, seed=5)
        assert segment_cost(sd, 3, 30, cfg) == segment_cost(sd, 3, 30, cfg)

    def test_memo(self, rng):
        sd = _sd(rng.normal(size=(20, 1)), rng.normal(size=20))
        coster = SegmentCoster(sd, FitConfig(H=1, W=2))
        a = coster.record(0, 10)
        assert coster.record(0, 10) is a and len(coster) == 1


class TestPrefixOracle:
    def test_pair(self):
        assert build_prefix_oracle([0, 1]).query(0, 1) == 0.5

    def test_singleton(self, rng):
        o = build_prefix_oracle(np.sort(rng.random(10)))
        assert all(o.query(i, i) == 0 for i in range(10))

    def test_all_pairs_match_direct(self, rng):
        v = rng.random(50)
        o = build_prefix_oracle(v)
        for i in range(50):
            for j in range(i, 50):
                assert abs(o.query(i, j) - sse(v[i:j + 1].tolist())) < 1e-9

    def test_absolute_all_pairs(self, rng):
        v = np.sort(rng.normal(size=30))
        o = build_prefix_oracle(v)
        for i in range(30):
            for j in range(i, 30):
                assert abs(o.query_absolute(i, j) - sad(v[i:j + 1].tolist())) < 1e-9

    def test_never_negative(self):
        v = np.full(100, 1e8) + np.arange(100) * 1e-8
        o = build_prefix_oracle(v)
        assert min(o.query(i, j) for i in range(0, 100, 7) for j in range(i, 100, 5)) >= 0

    def test_large_n_accuracy(self, rng):
        v = rng.normal(size=100_000) * 3 + 50
        o = build_prefix_oracle(v)
        for i, j in [(0, 99_999), (10, 20), (5000, 95_000), (99_990, 99_999)]:
            assert abs(o.query(i, j) - sse(v[i:j + 1].tolist())) < 1e-9 * max(1.0, sse(v[i:j + 1].tolist()))

    def test_consistent_with_constant_record(self, rng):
        sd = _sd(rng.normal(size=(25, 1)), rng.random(25))
        cfg = FitConfig(H=2, W=1, model_family="constant")
        coster = SegmentCoster(sd, cfg)
        for i, j in [(0, 24), (3, 9), (12, 12)]:
            assert abs(coster.value(i, j) - coster.record(i, j).cost) < 1e-12
