"""Select the kernel backend.

Numba is used when importable unless ``CROSSNET_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel runs its pure-numpy twin.
"""
from __future__ import annotations

import os

_FALSEY = {"", "0", "false", "no", "off"}


def numba_disabled() -> bool:
    return os.environ.get("CROSSNET_DISABLE_NUMBA", "").strip().lower() not in _FALSEY


try:
    from numba import njit as _njit

    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and not numba_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when available, otherwise the plain function."""
    if _njit is None:
        return func
    return _njit(cache=True)(func)
