import numpy as np
import pytest

from plli import kmeans, nearest_centroid
from plli.exceptions import EmptyCentroidList

from oracles import best_kmeans_1d_points


def test_separated_line():
    pts = [[0.0], [1.0], [10.0], [11.0]]
    res = kmeans(pts, 2, seed=0)
    assert sorted(res.centroids.ravel().tolist()) == [0.5, 10.5]
    assert res.inertia == pytest.approx(best_kmeans_1d_points([0, 1, 10, 11], 2)) == 1.0


@pytest.mark.parametrize("seed", range(10))
def test_separated_line_any_seed(seed):
    res = kmeans([[0.0], [1.0], [10.0], [11.0]], 2, seed=seed)
    assert res.inertia == 1.0


def test_single_cluster(rng):
    X = rng.normal(size=(30, 3))
    res = kmeans(X, 1, seed=3)
    np.testing.assert_allclose(res.centroids[0], X.mean(axis=0))
    assert res.inertia == pytest.approx(((X - X.mean(axis=0)) ** 2).sum())


def test_degenerate_reduction():
    res = kmeans([[2.0, 5.0]], 3, seed=1)
    assert res.effective_k == 1
    np.testing.assert_array_equal(res.centroids, [[2.0, 5.0]])
    assert res.inertia == 0


def test_duplicates_reduce_k():
    res = kmeans([[1.0], [1.0], [2.0], [2.0]], 4, seed=0)
    assert res.effective_k == 2 and res.inertia == 0


def test_deterministic(rng):
    X = rng.normal(size=(200, 2))
    a = kmeans(X, 4, seed=11)
    b = kmeans(X.copy(), 4, seed=11)
    np.testing.assert_array_equal(a.assignment, b.assignment)
    np.testing.assert_array_equal(a.centroids, b.centroids)
    assert a.inertia == b.inertia


@pytest.mark.parametrize("seed", range(8))
def test_invariants(seed):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(size=(40, 2)), rng.normal(size=(40, 2)) + 3])
    res = kmeans(X, 5, seed=seed)
    counts = np.bincount(res.assignment, minlength=res.effective_k)
    assert np.all(counts > 0)
    trace = np.array(res.inertia_trace)
    assert np.all(np.diff(trace) <= 1e-9 * trace[:-1])
    if res.converged:
        for x, a in zip(X, res.assignment):
            assert nearest_centroid(x, res.centroids) == a


class TestNearestCentroid:
    def test_basic(self):
        assert nearest_centroid([0.0], [[-1.0], [5.0]]) == 0

    def test_tie_lowest_index(self):
        assert nearest_centroid([0.5], [[0.0], [1.0]]) == 0

    def test_single(self):
        assert nearest_centroid([3.0, 3.0], [[0.0, 0.0]]) == 0

    def test_empty(self):
        with pytest.raises(EmptyCentroidList):
            nearest_centroid([0.0], [])
