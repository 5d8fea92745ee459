"""Kernel selection.  The compiled kernel is used when it imports; setting
``BALLISTIC_PURE_PYTHON=1`` forces the pure-Python fallback."""
import os

if os.environ.get("BALLISTIC_PURE_PYTHON") == "1":
    from . import _pykernel as kernel
else:
    try:
        from . import _ckernel as kernel
    except ImportError:  # extension not built
        from . import _pykernel as kernel

IMPLEMENTATION = kernel.IMPLEMENTATION
RENEWED = kernel.RENEWED
CENSORED = kernel.CENSORED
NEED_MORE = kernel.NEED_MORE

xi_fast = kernel.xi_fast
renewal = kernel.renewal
enum_left = kernel.enum_left
enum_right = kernel.enum_right
