"""Kernel selection.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` twin.  Setting ``SKEWCALC_PURE_PYTHON=1`` forces
the fallback.
"""

import os

from . import _pykernels

if os.environ.get("SKEWCALC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
WordReducer = _impl.WordReducer
free_mul = _impl.free_mul
substitute = _impl.substitute


def backends():
    """Map backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
