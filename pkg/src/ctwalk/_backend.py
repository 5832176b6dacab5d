"""Kernel backend selection.

The CTWALK_BACKEND environment variable controls which implementation of
the hot kernels is used: "numba" insists on the compiled versions,
"numpy" forces the plain fallbacks, and "auto" (the default) compiles
with numba when it imports cleanly. The flag is read once at import.
"""
from __future__ import annotations

import os

BACKEND_ENV = "CTWALK_BACKEND"
_CHOICES = ("auto", "numba", "numpy")


def _resolve() -> bool:
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if choice not in _CHOICES:
        raise ValueError(f"{BACKEND_ENV} must be one of {_CHOICES}, got {choice!r}")
    if choice == "numpy":
        return False
    try:
        import numba  # noqa: F401
    except ImportError as exc:
        if choice == "numba":
            raise ImportError(f"{BACKEND_ENV}=numba but numba failed to import") from exc
        return False
    return True


USING_NUMBA = _resolve()


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
