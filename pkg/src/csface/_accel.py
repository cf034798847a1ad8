"""Numba switch.

Hot kernels exist in two flavours: a numba ``@njit`` version and a plain
numpy version. ``USE_NUMBA`` picks which one the public functions dispatch
to. Set ``CSFACE_NO_NUMBA=1`` to force the numpy path (numba is also skipped
when it is not importable).
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAS_NUMBA = numba is not None
DISABLED = os.environ.get("CSFACE_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAS_NUMBA and not DISABLED


def njit(*args, **kwargs):
    """``numba.njit(cache=True, nogil=True)``; returns None without numba."""
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)

    def wrap(fn):
        if not HAS_NUMBA:
            return None
        return numba.njit(**kwargs)(fn)

    if args and callable(args[0]):
        return wrap(args[0])
    return wrap


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
