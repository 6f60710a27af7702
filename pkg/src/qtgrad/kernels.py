"""Backend selection for the quadratic benchmark inner loop.

Imports the compiled kernel when the extension built, otherwise the numpy
fallback.  Set QTGRAD_PURE_PYTHON=1 to force the fallback even when the
extension is present (used by the backend benchmark and by tests).
Both backends implement the identical contract; results may differ in the
last bits because summation order differs.
"""

import os

from . import _quadkernel_py

if os.environ.get("QTGRAD_PURE_PYTHON", "") not in ("", "0"):
    _impl = _quadkernel_py
else:
    try:
        from . import _quadkernel as _impl
    except ImportError:
        _impl = _quadkernel_py

quad_step = _impl.quad_step
quad_gradient = _impl.quad_gradient
quad_value = _impl.quad_value


def backend_name() -> str:
    """Name of the active backend, "cython" or "numpy"."""
    return _impl.BACKEND
