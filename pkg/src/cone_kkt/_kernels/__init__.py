"""Kernel backend selection.

The hot loops (extragradient solve, phase-1 projected gradient) exist twice:
a Cython extension (``_core``) and a numpy fallback (``_reference``). The
compiled one is picked when importable; ``CONE_KKT_BACKEND=python`` forces
the fallback and ``CONE_KKT_BACKEND=compiled`` makes a missing extension an
error instead of a silent downgrade.
"""

import os

from . import _reference

_requested = os.environ.get("CONE_KKT_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = _reference
elif _requested == "compiled":
    from . import _core as _impl  # ImportError here is intentional
elif _requested:
    raise ValueError(f"CONE_KKT_BACKEND must be 'python' or 'compiled', got {_requested!r}")
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _reference

extragradient_loop = _impl.extragradient_loop
phase1_loop = _impl.phase1_loop


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return "python" if _impl is _reference else "compiled"
