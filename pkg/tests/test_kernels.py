"""The compiled kernels and the numpy fallback must agree."""
import numpy as np
import pytest

from plli import _kernels_py as P

C = pytest.importorskip("plli._kernels")


@pytest.fixture
def sorted_series(rng):
    y = np.sort(rng.random(80))
    yc = y - y.mean()
    return P.compensated_cumsum(yc), P.compensated_cumsum(yc * yc), yc


def test_cumsum_matches(rng):
    x = rng.normal(size=500) * 1e6
    np.testing.assert_array_equal(P.compensated_cumsum(x), C.compensated_cumsum(x))


@pytest.mark.parametrize("loss", [0, 1])
@pytest.mark.parametrize("stride", [1, 2, 7])
def test_dp_prefix_matches(sorted_series, loss, stride):
    a = P.dp_prefix(*sorted_series, 5, loss, stride)
    b = C.dp_prefix(*sorted_series, 5, loss, stride)
    np.testing.assert_allclose(a[0], b[0], rtol=0, atol=1e-12, equal_nan=True)
    np.testing.assert_array_equal(a[1], b[1])


@pytest.mark.parametrize("loss", [0, 1])
def test_dc_matches_full_scan(sorted_series, loss):
    full = C.dp_prefix(*sorted_series, 6, loss, 1)
    for dc in (P.dc_prefix(*sorted_series, 6, loss), C.dc_prefix(*sorted_series, 6, loss)):
        np.testing.assert_allclose(dc[0], full[0], rtol=0, atol=1e-12, equal_nan=True)


def test_linear_cost_matrix_matches(rng):
    X = rng.normal(size=(35, 3))
    y = rng.normal(size=35)
    a = P.linear_cost_matrix(X, y, 1e-8)
    b = C.linear_cost_matrix(X, y, 1e-8)
    assert np.array_equal(np.isfinite(a), np.isfinite(b))
    f = np.isfinite(a)
    np.testing.assert_allclose(a[f], b[f], rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("full", [True, False])
@pytest.mark.parametrize("stride", [1, 3])
def test_dp_dense_matches(rng, full, stride):
    G = np.triu(rng.random((30, 30)) * 5)
    G[np.tril_indices(30, -1)] = np.inf
    a = P.dp_dense(G, 4, stride, full)
    b = C.dp_dense(G, 4, stride, full)
    np.testing.assert_allclose(a[0], b[0], rtol=0, atol=1e-12, equal_nan=True)
    np.testing.assert_array_equal(a[1], b[1])


class TestBackendSelection:
    def _backend(self, **env):
        import os
        import subprocess
        import sys
        out = subprocess.run([sys.executable, "-c", "import plli; print(plli.BACKEND)"],
                             env={**os.environ, **env}, capture_output=True, text=True, check=True)
        return out.stdout.strip()

    def test_env_forces_python(self):
        assert self._backend(PLLI_PURE_PYTHON="1") == "python"

    def test_default_prefers_compiled(self):
        from conftest import _compiled
        expected = "compiled" if _compiled is not None else "python"
        assert self._backend(PLLI_PURE_PYTHON="") == expected
