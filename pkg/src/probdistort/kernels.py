"""Kernel selection: compiled extension when available, NumPy fallback otherwise.

Set PROBDISTORT_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the parity tests).
"""

from __future__ import annotations

import os

if os.environ.get("PROBDISTORT_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

IMPLEMENTATION: str = _impl.IMPLEMENTATION
power_apply = _impl.power_apply
power_iterate = _impl.power_iterate
mirror_ascent = _impl.mirror_ascent

__all__ = ["IMPLEMENTATION", "power_apply", "power_iterate", "mirror_ascent"]
