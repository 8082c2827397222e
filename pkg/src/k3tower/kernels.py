"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Set ``K3TOWER_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
quartic_zero_count = _pykernels.quartic_zero_count
kernel_violations = _pykernels.kernel_violations

if os.environ.get("K3TOWER_BACKEND", "").lower() != "python":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        quartic_zero_count = _kernels.quartic_zero_count
        kernel_violations = _kernels.kernel_violations


def thread_count() -> int:
    """Worker count from ``K3TOWER_THREADS`` (default 1)."""
    raw = os.environ.get("K3TOWER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
