"""Backend selection for the hot kernels.

Kernels are written once against numpy arrays.  With numba available they are
compiled with ``nogil=True`` so worker threads run them concurrently; setting
``PCLIQUE_NO_NUMBA=1`` runs the very same source in the interpreter.
"""

import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

_disabled = os.environ.get("PCLIQUE_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("disabled by PCLIQUE_NO_NUMBA")
    import numba
    from numba.cpython.unsafe.numbers import trailing_zeros as _trailing_zeros
except ImportError as exc:
    numba = None
    if not _disabled:
        logger.warning("numba unavailable (%s); falling back to the interpreter", exc)

USE_NUMBA = numba is not None
BACKEND = "numba" if USE_NUMBA else "numpy"

ONE = np.uint64(1)
ZERO = np.uint64(0)
WORD_BITS = 64


if USE_NUMBA:

    def jit(func):
        return numba.njit(nogil=True, cache=True)(func)

    @jit
    def ctz(x):
        """Index of the lowest set bit of a nonzero uint64."""
        return np.int64(_trailing_zeros(x))

else:

    def jit(func):
        return func

    def ctz(x):
        x = int(x)
        return (x & -x).bit_length() - 1
