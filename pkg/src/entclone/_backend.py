"""Backend selection for the compiled kernels.

Set ``ENTCLONE_DISABLE_NUMBA=1`` to run every kernel on its pure-numpy
path. The flag is read once, at import time.
"""
import os

_DISABLED = os.environ.get("ENTCLONE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba
    from numba import njit as _njit

    USE_NUMBA = True
except ImportError:
    numba = None
    USE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, otherwise a no-op decorator."""
    if USE_NUMBA:
        kwargs.setdefault("cache", True)
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
