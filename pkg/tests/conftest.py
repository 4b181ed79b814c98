import numpy as np
import pytest

import plli.kernels as kernels
from plli import _kernels_py

try:
    from plli import _kernels as _compiled
except ImportError:
    _compiled = None

KERNEL_NAMES = ["compensated_cumsum", "segment_costs_to", "dp_prefix", "dc_prefix",
                "linear_cost_matrix", "dp_dense"]

BACKENDS = ["python"] + (["compiled"] if _compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel backend by swapping ``plli.kernels``."""
    impl = _kernels_py if request.param == "python" else _compiled
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
