"""Backend selection for the hot kernels.

The compiled extension is used when it imports and ``FDWAVE_PURE_PYTHON`` is
unset; otherwise the NumPy fallback is used. ``BACKEND`` names the choice.
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCE_PY = os.environ.get("FDWAVE_PURE_PYTHON", "").strip() not in ("", "0")

try:
    if _FORCE_PY:
        raise ImportError("pure Python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

loggamma_array = _impl.loggamma_array
mb_line_sum = _impl.mb_line_sum
power_series_sum = _impl.power_series_sum


def backends():
    """Mapping of available backend names to kernel modules."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
