"""Selection between numba-compiled loops and the pure-numpy fallback.

Set ``OSCILLA_DISABLE_NUMBA=1`` before import to force the numpy paths.
Both paths stay importable so the benchmark can time them side by side.
"""
from __future__ import annotations

import os

DISABLE_ENV = "OSCILLA_DISABLE_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAS_NUMBA = _numba is not None


def _flag_set(value: str | None) -> bool:
    return (value or "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = HAS_NUMBA and not _flag_set(os.environ.get(DISABLE_ENV))


def njit(func):
    """Compile ``func`` in nopython mode when numba is present, else return it."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, fastmath=False)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
