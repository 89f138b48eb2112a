"""Optional numba acceleration.

Set ``SYMSIEVE_NUMBA=0`` to force the pure-numpy kernels.  When numba is not
installed the numpy kernels are used regardless of the flag.
"""
import os

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("SYMSIEVE_NUMBA", "1").strip().lower() not in (
    "0", "false", "no", "off")


def njit(fn):
    """Compile ``fn`` with numba if available, else return it unchanged.

    The uncompiled function is still valid Python, so the loop kernels can
    be exercised (slowly) without numba.
    """
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn
