"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the numpy
fallback is used. Set HANDTELEOP_KERNELS=py or =c to force a backend
(forcing `c` raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _pykernels

_forced = os.environ.get("HANDTELEOP_KERNELS", "").strip().lower()

if _forced == "py":
    _impl = _pykernels
    BACKEND = "python"
elif _forced == "c":
    from . import _ckernels as _impl  # type: ignore[no-redef]

    BACKEND = "compiled"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

knn_midpoint_round = _impl.knn_midpoint_round
plane_accumulate = _impl.plane_accumulate
