"""Numba availability and backend selection for the hot kernels.

Every hot kernel in :mod:`slrlab.kernels` has two implementations: a loop
version compiled with ``@njit`` and a vectorized pure-numpy fallback.  The
fallback is selected automatically when numba is unavailable, and can be
forced with the environment variable ``SLRLAB_DISABLE_NUMBA=1`` (setting
``NUMBA_DISABLE_JIT=1`` has the same effect, since running the loop kernels
uncompiled would be far slower than the numpy path).
"""

import os
import warnings

ENV_FLAG = "SLRLAB_DISABLE_NUMBA"


def _nop_njit(*args, **kwargs):
    if args and callable(args[0]):
        return args[0]

    def decorator(fn):
        return fn

    return decorator


try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = _nop_njit
    HAS_NUMBA = False
    warnings.warn(
        "numba could not be imported; using the pure-numpy kernel path",
        stacklevel=2,
    )


def _flag_set(name: str) -> bool:
    return os.environ.get(name, "0") not in ("", "0")


def numba_enabled() -> bool:
    """True when the jitted kernel path should be used."""
    if _flag_set(ENV_FLAG) or _flag_set("NUMBA_DISABLE_JIT"):
        return False
    return HAS_NUMBA
