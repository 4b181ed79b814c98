import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plli import LocalModel, feature_importance, fit_constant, fit_linear, predict_local
from plli.exceptions import DimensionMismatch, EmptyRegion, NumericalFailure

from oracles import sad_best_constant

finite = st.floats(-1e3, 1e3, allow_nan=False)


class TestFitConstant:
    def test_symmetric_pair(self):
        r = fit_constant([0, 1], "squared")
        assert r.model.intercept == 0.5 and r.cost == 0.5

    def test_singleton(self):
        r = fit_constant([7], "squared")
        assert r.model.intercept == 7 and r.cost == 0

    def test_absolute_against_scan(self):
        r = fit_constant([0, 0, 10], "absolute")
        c, cost = sad_best_constant([0, 0, 10])
        assert (r.model.intercept, r.cost) == (c, cost) == (0, 10)

    def test_lower_median(self):
        assert fit_constant([1, 2, 3, 4], "absolute").model.intercept == 2

    def test_empty(self):
        with pytest.raises(EmptyRegion):
            fit_constant([], "squared")

    @settings(max_examples=100, deadline=None)
    @given(st.lists(finite, min_size=1, max_size=20), finite, st.sampled_from(["squared", "absolute"]))
    def test_optimal_against_any_constant(self, values, other, loss):
        r = fit_constant(values, loss)
        v = np.asarray(values)
        alt = np.sum((v - other) ** 2) if loss == "squared" else np.sum(np.abs(v - other))
        assert r.cost <= alt + 1e-9 * max(1.0, alt)
        assert r.cost >= 0


class TestFitLinear:
    def test_exact_line(self):
        r = fit_linear([[0], [1], [2]], [1, 3, 5])
        np.testing.assert_allclose(r.model.coefficients, [2], atol=1e-9)
        assert abs(r.model.intercept - 1) < 1e-9
        assert r.cost < 1e-18

    def test_rank_deficient_matches_mean_fit(self):
        r = fit_linear([[1], [1]], [0, 2])
        assert np.all(np.isfinite(r.model.coefficients))
        assert r.cost == pytest.approx(fit_constant([0, 2]).cost, abs=1e-6)
        assert r.cost == pytest.approx(2.0, abs=1e-6)

    @pytest.mark.parametrize("d", [1, 3, 6])
    def test_single_point_interpolated(self, d, rng):
        x = rng.normal(size=(1, d))
        r = fit_linear(x, [3.7])
        assert abs(predict_local(r.model, x[0]) - 3.7) < 1e-6
        assert r.cost < 1e-6

    def test_orthogonality(self, rng):
        X = rng.normal(size=(50, 5))
        y = rng.normal(size=50)
        r = fit_linear(X, y, ridge_epsilon=0.0)
        Z = np.hstack([X, np.ones((50, 1))])
        resid = y - Z @ np.append(r.model.coefficients, r.model.intercept)
        assert np.max(np.abs(Z.T @ resid)) < 1e-8

    def test_point_on_line_keeps_coefficients(self, rng):
        X = rng.normal(size=(20, 2))
        y = X @ [1.5, -2.0] + 0.3 + 0.1 * rng.normal(size=20)
        a = fit_linear(X, y)
        x_new = np.array([[0.4, -1.1]])
        y_new = predict_local(a.model, x_new[0])
        b = fit_linear(np.vstack([X, x_new]), np.append(y, y_new))
        np.testing.assert_allclose(b.model.coefficients, a.model.coefficients, atol=1e-9)
        assert abs(b.model.intercept - a.model.intercept) < 1e-9

    def test_clip_applied_to_cost(self):
        r = fit_linear([[0], [1], [2]], [0, 1, 2], clip=(0, 1))
        assert r.model.clip == (0, 1)
        assert r.cost == pytest.approx(1.0)

    def test_singular_without_ridge_fails(self):
        with pytest.raises(NumericalFailure):
            fit_linear([[1], [1]], [0, 2], ridge_epsilon=0.0)


class TestPredictLocal:
    def test_constant(self):
        assert predict_local(LocalModel("constant", [0, 0], 2.0), [9, 9]) == 2

    def test_dot(self):
        assert predict_local(LocalModel("linear", [1, 1], 0.0), [2, 3]) == 5

    def test_clip(self):
        assert predict_local(LocalModel("linear", [10], 0.0, (0, 1)), [5]) == 1

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            predict_local(LocalModel("linear", [1, 1], 0.0), [1])


class TestFeatureImportance:
    def test_zero_coefficient(self):
        m = LocalModel("linear", [2, 0], 0.0)
        np.testing.assert_array_equal(feature_importance(m, [1, 1]), [2, 0])

    def test_constant_feature(self):
        m = LocalModel("linear", [1, 1], 0.0)
        np.testing.assert_array_equal(feature_importance(m, [3, 0]), [3, 0])

    def test_constant_model(self):
        m = LocalModel("constant", [0, 0, 0], 4.0)
        np.testing.assert_array_equal(feature_importance(m, [1, 2, 3]), [0, 0, 0])

    def test_negative_coefficient(self):
        m = LocalModel("linear", [-2], 0.0)
        np.testing.assert_array_equal(feature_importance(m, [0.5]), [1.0])
