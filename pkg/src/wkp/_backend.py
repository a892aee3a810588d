"""Select the compiled kernel core when available.

Set ``WKP_PURE_PYTHON=1`` to force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
kernel_batch = _kernels_py.kernel_batch

if os.environ.get("WKP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        kernel_batch = _ckernels.kernel_batch

__all__ = ["BACKEND", "kernel_batch"]
