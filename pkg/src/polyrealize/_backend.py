"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Set ``POLYREALIZE_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

_forced = os.environ.get("POLYREALIZE_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _pykernels as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        if _forced in ("cython", "compiled"):
            raise
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
Engine = _impl.Engine
orient = _impl.orient
pair_contribution = _impl.pair_contribution
point_in_general_position = _impl.point_in_general_position


def python_backend():
    from . import _pykernels

    return _pykernels


def compiled_backend():
    """The extension module, or None if it was not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
