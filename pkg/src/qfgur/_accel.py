"""Numba switch.

Set ``QFGUR_DISABLE_NUMBA=1`` to run every kernel through its pure-numpy
path (useful for debugging, or where numba is unavailable). The flag is read
once at import time.
"""

import os

_disabled = os.environ.get("QFGUR_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper


BACKEND = "numba" if HAVE_NUMBA else "numpy"
