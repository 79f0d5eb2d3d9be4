"""Selection of the numeric kernel backend.

The hot inner loops ship in two implementations: numba-compiled scalar
kernels (default) and a vectorized pure-numpy fallback.  The environment
variable ``LIFCAS_NUMBA`` picks the default at import time (``0``/``off``
forces numpy); :func:`use_backend` switches at runtime, e.g. for the
benchmark in ``benchmarks/backend_bench.py``.
"""

from __future__ import annotations

import contextlib
import os
import warnings

from . import _kernels_numpy

_modules = {"numpy": _kernels_numpy}
_numba_error = None
try:
    from . import _kernels_numba

    _modules["numba"] = _kernels_numba
except ImportError as exc:  # pragma: no cover - depends on environment
    _numba_error = exc


def _env_wants_numba():
    flag = os.environ.get("LIFCAS_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


if _env_wants_numba() and "numba" in _modules:
    _active = "numba"
else:
    if _env_wants_numba() and _numba_error is not None:
        warnings.warn(f"numba unavailable ({_numba_error}); using the numpy backend")
    _active = "numpy"


def available_backends():
    return tuple(sorted(_modules))


def backend_name():
    return _active


def kernels():
    """Module providing ``finite_m_batch`` and ``zero_mode_term``."""
    return _modules[_active]


def set_backend(name):
    global _active
    if name not in _modules:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active = name


@contextlib.contextmanager
def use_backend(name):
    """Temporarily switch the kernel backend."""
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def set_num_threads(n):
    """Clamp and apply a thread-count request to the numba runtime."""
    if "numba" not in _modules:
        return 1
    import numba

    # workqueue avoids the TBB-version probe; kernels are deterministic anyway
    numba.config.THREADING_LAYER = "workqueue"
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n
