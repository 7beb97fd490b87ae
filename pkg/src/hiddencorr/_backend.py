"""Kernel backend selection.

The compiled extension is preferred when importable. Set
``HIDDENCORR_BACKEND=python`` to force the numpy fallback, or use
:func:`use_backend` to switch temporarily (tests and benchmarks do).
"""
import contextlib
import os

from . import _purepy

_BACKENDS = {"python": _purepy}
try:
    from . import _core
except ImportError:  # extension not built
    _core = None
else:
    _BACKENDS["compiled"] = _core


def _initial():
    requested = os.environ.get("HIDDENCORR_BACKEND", "").strip().lower()
    if requested:
        if requested not in _BACKENDS:
            raise ImportError(
                f"HIDDENCORR_BACKEND={requested!r} is not available; "
                f"have {sorted(_BACKENDS)}"
            )
        return requested
    return "compiled" if "compiled" in _BACKENDS else "python"


_active = _initial()


def available():
    return sorted(_BACKENDS)


def name():
    return _active


def kernels():
    return _BACKENDS[_active]


@contextlib.contextmanager
def use_backend(backend):
    """Route all kernel calls through ``backend`` inside the block.

    Process-global; not meant for concurrent use.
    """
    global _active
    if backend not in _BACKENDS:
        raise ValueError(f"backend {backend!r} not available; have {available()}")
    previous, _active = _active, backend
    try:
        yield _BACKENDS[backend]
    finally:
        _active = previous
