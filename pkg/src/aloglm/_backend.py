"""Numba/numpy backend selection for the hot kernels.

Set ``ALOGLM_NUMBA=0`` in the environment to force the pure-numpy fallback
path.  By default numba is used when importable; kernels are compiled lazily
with on-disk caching, so the first call in a fresh environment pays the
compilation cost once.
"""

import os

_flag = os.environ.get("ALOGLM_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "off", "no")

NUMBA_ENABLED = False
if _requested:
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False


def jit(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if NUMBA_ENABLED:
        return _njit(cache=True)(fn)
    return fn


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
