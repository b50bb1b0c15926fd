"""Import-time selection between the compiled kernels and the numpy fallback.

The compiled extension is optional.  Set ``BANDSELECT_PURE_PYTHON=1`` to
force the fallback (useful for benchmarking both sides).
"""

import os

from bandselect import _kernels_py

if os.environ.get("BANDSELECT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from bandselect import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

joint_counts = _impl.joint_counts
nn_classify = _impl.nn_classify


def backend_name() -> str:
    """Which kernel implementation is active: "compiled" or "python"."""
    return _impl.BACKEND_NAME
