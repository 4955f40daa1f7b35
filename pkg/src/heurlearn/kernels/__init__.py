"""Hot numeric kernels: delete-relaxation cost propagation and MLP SGD.

Two interchangeable implementations exist. ``numba_impl`` compiles the inner
loops with ``@njit``; ``numpy_impl`` is a pure-numpy fallback. The numba path
is used when importable unless ``HEURLEARN_DISABLE_NUMBA`` is set to a truthy
value before import.
"""

import os

from ._common import INF

_TRUTHY = ("1", "true", "yes", "on")


def get_backend(name):
    """Return the kernel module for ``"numba"`` or ``"numpy"``."""
    if name == "numba":
        from . import numba_impl

        return numba_impl
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if os.environ.get("HEURLEARN_DISABLE_NUMBA", "").strip().lower() in _TRUTHY:
        return "numpy", get_backend("numpy")
    try:
        return "numba", get_backend("numba")
    except ImportError:
        return "numpy", get_backend("numpy")


BACKEND, _impl = _select()

hadd = _impl.hadd
relaxed_plan = _impl.relaxed_plan
mlp_forward = _impl.mlp_forward
mlp_predict = _impl.mlp_predict
mlp_row_gradients = _impl.mlp_row_gradients
mlp_sgd_epoch = _impl.mlp_sgd_epoch

__all__ = [
    "BACKEND",
    "INF",
    "get_backend",
    "hadd",
    "relaxed_plan",
    "mlp_forward",
    "mlp_predict",
    "mlp_row_gradients",
    "mlp_sgd_epoch",
]
