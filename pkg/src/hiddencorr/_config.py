"""Numerical tolerances, overridable per context.

The defaults are module constants; ``tolerances(...)`` swaps them for the
duration of a ``with`` block without touching other threads.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    #: eigenvalues closer than this are grouped as degenerate
    gap: float = 1e-8
    #: eigenvalues below this contribute nothing to an entropy
    eig_floor: float = 1e-12
    hermitian: float = 1e-9
    psd: float = 1e-9
    trace: float = 1e-10
    #: slack on every inequality check
    bound_slack: float = 1e-8
    #: entrywise threshold for "commutes"
    commutator: float = 1e-10
    #: residual norm below which a projected basis vector is discarded
    canon_threshold: float = 1e-8


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "hiddencorr_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def tolerances(**overrides):
    """Temporarily override tolerance fields, e.g. ``tolerances(gap=1e-6)``."""
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
