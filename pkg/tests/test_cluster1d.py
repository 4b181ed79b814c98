import time

import numpy as np
import pytest

from plli import brute_force_1d, check_midpoint_property, cluster_1d
from plli.cluster1d import Clustering1D
from plli.exceptions import KTooLarge, TooLargeForOracle, ValidationError

from oracles import best_kmeans_1d_points, best_ordered_partition, sad


class TestExamples:
    def test_two_groups(self, backend):
        c = cluster_1d([1, 2, 10, 11, 12], 2)
        assert c.boundaries == (2,)
        assert c.centers == (1.5, 11.0)
        assert c.total_cost == pytest.approx(2.5, abs=1e-12)

    def test_outlier_alone(self, backend):
        c = cluster_1d([0, 1, 100], 2)
        assert c.boundaries == (2,)
        assert c.centers == (0.5, 100.0)

    def test_k1_and_kn(self, backend, rng):
        v = rng.random(9)
        assert cluster_1d(v, 1).total_cost == pytest.approx(float(((v - v.mean()) ** 2).sum()))
        c = cluster_1d(v, 9)
        assert c.total_cost == 0.0
        assert c.boundaries == tuple(range(1, 9))

    def test_unsorted_input(self):
        assert cluster_1d([12, 1, 11, 2, 10], 2).boundaries == (2,)

    def test_labels(self):
        c = cluster_1d([1, 2, 10, 11, 12], 2)
        assert c.labels().tolist() == [0, 0, 1, 1, 1]


class TestErrors:
    def test_k_too_large(self):
        with pytest.raises(KTooLarge):
            cluster_1d([1.0, 2.0], 3)

    def test_bad_input(self):
        with pytest.raises(ValidationError):
            cluster_1d([], 1)
        with pytest.raises(ValidationError):
            cluster_1d([1.0, np.nan], 1)

    def test_oracle_limit(self, rng):
        with pytest.raises(TooLargeForOracle):
            brute_force_1d(rng.random(21), 2)


class TestOptimality:
    @pytest.mark.parametrize("seed", range(25))
    def test_matches_brute_force(self, backend, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 13))
        K = int(rng.integers(1, min(n, 5) + 1))
        v = rng.normal(size=n) * 10
        fast, slow = cluster_1d(v, K), brute_force_1d(v, K)
        assert abs(fast.total_cost - slow.total_cost) < 1e-9
        ref, _ = best_ordered_partition(sorted(v.tolist()), K)
        assert abs(fast.total_cost - ref) < 1e-9

    @pytest.mark.parametrize("seed", range(8))
    def test_contiguous_is_globally_optimal(self, seed):
        rng = np.random.default_rng(100 + seed)
        v = rng.normal(size=7)
        for K in (2, 3):
            assert cluster_1d(v, K).total_cost == pytest.approx(best_kmeans_1d_points(v.tolist(), K), abs=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_absolute_loss(self, backend, seed):
        rng = np.random.default_rng(200 + seed)
        v = rng.exponential(size=int(rng.integers(3, 12)))
        K = int(rng.integers(1, 4))
        c = cluster_1d(v, K, loss="absolute")
        ref, _ = best_ordered_partition(sorted(v.tolist()), K, cost=sad)
        assert abs(c.total_cost - ref) < 1e-9
        assert abs(brute_force_1d(v, K, loss="absolute").total_cost - ref) < 1e-9

    @pytest.mark.parametrize("seed", range(30))
    def test_midpoint_property(self, seed):
        rng = np.random.default_rng(300 + seed)
        v = rng.normal(size=int(rng.integers(5, 60)))
        assert check_midpoint_property(cluster_1d(v, int(rng.integers(2, 5))))

    def test_midpoint_detector_catches_bad_split(self):
        v = np.array([0.0, 1.0, 2.0, 100.0])
        bad = Clustering1D((1,), (0.0, 34.333333333333336), 0.0, v)
        assert not check_midpoint_property(bad)

    @pytest.mark.parametrize("a,b", [(3.0, -7.5), (0.25, 1e6), (-2.0, 0.0)])
    def test_affine_equivariance(self, rng, a, b):
        v = rng.normal(size=40)
        c1, c2 = cluster_1d(v, 4), cluster_1d(a * v + b, 4)
        assert c2.total_cost == pytest.approx(a * a * c1.total_cost, rel=1e-9, abs=1e-9)
        sizes1 = sorted(len(g) for g in c1.clusters())
        sizes2 = sorted(len(g) for g in c2.clusters())
        assert sizes1 == sizes2

    def test_translation_same_boundaries(self, rng):
        v = rng.normal(size=50)
        assert cluster_1d(v, 5).boundaries == cluster_1d(v + 123.0, 5).boundaries


class TestScale:
    def test_large_input(self):
        v = np.random.default_rng(7).normal(size=100_000)
        t0 = time.perf_counter()
        c = cluster_1d(v, 8)
        assert time.perf_counter() - t0 < 60
        assert c.K == 8
        assert check_midpoint_property(c)
