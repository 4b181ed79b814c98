"""Backend selection for the hot loops.

Uses the compiled ``plli._kernels`` extension when it is importable and
``PLLI_PURE_PYTHON`` is not set to ``1``; otherwise the numpy fallback.
"""
import os

from . import _kernels_py

if os.environ.get("PLLI_PURE_PYTHON", "") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

SQUARED = _kernels_py.SQUARED
ABSOLUTE = _kernels_py.ABSOLUTE

compensated_cumsum = _impl.compensated_cumsum
segment_costs_to = _impl.segment_costs_to
dp_prefix = _impl.dp_prefix
dc_prefix = _impl.dc_prefix
linear_cost_matrix = _impl.linear_cost_matrix
dp_dense = _impl.dp_dense


def loss_code(loss: str) -> int:
    return SQUARED if loss == "squared" else ABSOLUTE
