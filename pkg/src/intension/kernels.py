"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
reference kernels take over.  Setting ``INTENSION_PURE=1`` forces the
reference backend.
"""
import os

from . import _pykernels

if os.environ.get("INTENSION_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND
count_models = _impl.count_models
accept_mask = _impl.accept_mask
reject_counts = _impl.reject_counts
rejection_sets = _impl.rejection_sets
exhaustive_weakest = _impl.exhaustive_weakest
greedy_weaken = _impl.greedy_weaken

__all__ = [
    "BACKEND",
    "count_models",
    "accept_mask",
    "reject_counts",
    "rejection_sets",
    "exhaustive_weakest",
    "greedy_weaken",
]
