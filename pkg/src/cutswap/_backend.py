"""Select the compiled kernels when they are importable.

Set ``CUTSWAP_BACKEND=python`` to force the pure-Python implementation.
"""

import os

try:
    from cutswap import _core as _native
except ImportError:  # extension not built
    _native = None

BACKENDS = ("auto", "native", "python")

default = os.environ.get("CUTSWAP_BACKEND", "auto")
if default not in BACKENDS:
    raise ImportError(f"CUTSWAP_BACKEND must be one of {BACKENDS}, got {default!r}")

native = _native if default != "python" else None


def available() -> bool:
    return _native is not None


def pick(backend=None):
    """Return the native module for ``backend``, or None for the Python route."""
    backend = backend or default
    if backend == "python":
        return None
    if backend == "native":
        if _native is None:
            raise RuntimeError("native backend requested but cutswap._core is not built")
        return _native
    if backend == "auto":
        return native
    raise ValueError(f"unknown backend {backend!r}")
