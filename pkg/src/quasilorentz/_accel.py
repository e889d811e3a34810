"""Backend selection for the hot trajectory kernels.

Numba is used when it imports cleanly and ``QUASILORENTZ_DISABLE_NUMBA`` is
unset (or set to ``0``).  Otherwise every batch entry point falls back to the
vectorised numpy implementation in :mod:`quasilorentz.kernels_numpy`.
"""

import os

ENV_FLAG = "QUASILORENTZ_DISABLE_NUMBA"


def _numba_requested():
    value = os.environ.get(ENV_FLAG, "").strip().lower()
    return value in ("", "0", "false", "no")


try:
    if not _numba_requested():
        raise ImportError("numba disabled by " + ENV_FLAG)
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False


def default_backend():
    return "numba" if NUMBA_AVAILABLE else "numpy"


def resolve_backend(backend=None):
    """Map ``None``/``"auto"`` to the default and validate explicit choices."""
    if backend in (None, "auto"):
        return default_backend()
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError(f"numba backend requested but unavailable (is {ENV_FLAG} set?)")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend
