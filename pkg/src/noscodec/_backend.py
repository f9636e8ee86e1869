"""Kernel backend selection.

The compiled extension is preferred when it was built; the numpy fallback
is always available.  NOSCODEC_BACKEND=py|c overrides the choice.
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("NOSCODEC_BACKEND", "").strip().lower()

if _forced in ("py", "python", "pure"):
    _impl = _kernels_py
    BACKEND = "python"
elif _forced in ("c", "ext", "compiled"):
    from . import _kernels as _impl  # ImportError here means the build is missing

    BACKEND = "compiled"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

kbest_core = _impl.kbest_core
crc_remainder = _impl.crc_remainder
crc_scan = _impl.crc_scan


def backend_name() -> str:
    """Name of the active kernel backend: "compiled" or "python"."""
    return BACKEND
