"""Kernel selection: the compiled extension when importable, else numpy.

Set ``QBAKER_PURE_PYTHON=1`` to force the numpy kernel.
"""

import os

from . import _husimi_py

python_husimi_kernel = _husimi_py.husimi_kernel

try:
    if os.environ.get("QBAKER_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("numpy kernel forced by QBAKER_PURE_PYTHON")
    from ._husimi_ext import husimi_kernel as compiled_husimi_kernel
except ImportError:
    compiled_husimi_kernel = None

BACKEND = "compiled" if compiled_husimi_kernel is not None else "python"
husimi_kernel = compiled_husimi_kernel or python_husimi_kernel
