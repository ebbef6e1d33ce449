"""Numba selection.

Set ``CYCLICMUB_DISABLE_NUMBA=1`` to force the pure numpy/Python kernels.
The flag is read once at import time.
"""

import os

USE_NUMBA = os.environ.get("CYCLICMUB_DISABLE_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
