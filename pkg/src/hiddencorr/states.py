"""Density matrices, classically correlated states and entropies.

Entropies are in bits throughout.
"""
from __future__ import annotations

import dataclasses
import math
from collections.abc import Iterable, Sequence

import numpy as np

from . import _backend
from ._config import get_tolerances
from .errors import (
    DimensionMismatch,
    EmptyKeepSet,
    IncompleteBasis,
    InvalidDensityMatrix,
    InvalidDistribution,
    InvalidProbabilityTable,
)
from .linalg import MAX_DIM, dagger, hermiticity_error, partial_trace


@dataclasses.dataclass(frozen=True)
class SubsystemLayout:
    """Tensor factor dimensions plus the cut separating party a from party b.

    Factors ``0 .. cut-1`` belong to party a, ``cut ..`` to party b.
    """

    factor_dims: tuple[int, ...]
    cut: int

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        object.__setattr__(self, "factor_dims", dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatch(f"factor dims must be positive integers, got {dims}")
        if not 1 <= self.cut < len(dims):
            raise DimensionMismatch(f"cut must satisfy 1 <= cut < {len(dims)}, got {self.cut}")
        if self.dim > MAX_DIM:
            raise DimensionMismatch(f"total dimension {self.dim} exceeds {MAX_DIM}")

    @classmethod
    def qubits(cls, n: int, cut: int) -> SubsystemLayout:
        return cls((2,) * n, cut)

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    @property
    def dim(self) -> int:
        return int(math.prod(self.factor_dims))

    @property
    def party_a(self) -> tuple[int, ...]:
        return tuple(range(self.cut))

    @property
    def party_b(self) -> tuple[int, ...]:
        return tuple(range(self.cut, self.n_factors))

    @property
    def dim_a(self) -> int:
        return int(math.prod(self.factor_dims[: self.cut]))

    @property
    def dim_b(self) -> int:
        return int(math.prod(self.factor_dims[self.cut :]))

    @property
    def dims_a(self) -> tuple[int, ...]:
        return self.factor_dims[: self.cut]

    @property
    def dims_b(self) -> tuple[int, ...]:
        return self.factor_dims[self.cut :]


@dataclasses.dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix on a bipartite tensor-product space.

    Construction checks Hermiticity (1e-9), positivity (eigenvalues >= -1e-9)
    and unit trace (1e-10) and raises :class:`InvalidDensityMatrix` on failure.
    """

    matrix: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDensityMatrix(f"density matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.layout.dim:
            raise DimensionMismatch(
                f"matrix dimension {m.shape[0]} != layout dimension {self.layout.dim}"
            )
        _validate_density(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def unchecked(cls, matrix, layout: SubsystemLayout) -> DensityMatrix:
        """Wrap a matrix known to be valid (e.g. a reduction of a valid state)."""
        obj = object.__new__(cls)
        m = np.asarray(matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(obj, "matrix", m)
        object.__setattr__(obj, "layout", layout)
        return obj

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def marginal_a(self) -> np.ndarray:
        return partial_trace(self.matrix, self.layout, self.layout.party_a)

    def marginal_b(self) -> np.ndarray:
        return partial_trace(self.matrix, self.layout, self.layout.party_b)

    def isclose(self, other: DensityMatrix, atol: float = 1e-10) -> bool:
        return self.layout == other.layout and bool(
            np.all(np.abs(self.matrix - other.matrix) <= atol)
        )


def _validate_density(m: np.ndarray) -> None:
    tol = get_tolerances()
    herr = hermiticity_error(m)
    if herr > tol.hermitian:
        raise InvalidDensityMatrix(f"not Hermitian: max |rho - rho^dagger| = {herr:.3e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol.trace:
        raise InvalidDensityMatrix(f"trace {tr.real:.12g} differs from 1")
    w, _ = _backend.kernels().eigh(0.5 * (m + dagger(m)))
    if np.min(w) < -tol.psd:
        raise InvalidDensityMatrix(f"not positive semidefinite: min eigenvalue {np.min(w):.3e}")


def _orthonormal_rows(kets: np.ndarray, atol: float) -> bool:
    gram = kets.conj() @ kets.T
    return bool(np.all(np.abs(gram - np.eye(len(kets))) <= atol))


@dataclasses.dataclass(frozen=True, eq=False)
class ClassicalStateSpec:
    """Probability table ``p[m, n]`` over two local orthonormal bases.

    ``basis_a[m]`` / ``basis_b[n]`` are kets (rows); the projectors are
    their outer products. Both bases must be complete.
    """

    probs: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        a = np.array(self.basis_a, dtype=complex)
        b = np.array(self.basis_b, dtype=complex)
        lay = self.layout
        if a.ndim != 2 or a.shape != (lay.dim_a, lay.dim_a):
            raise IncompleteBasis(
                f"basis_a must hold {lay.dim_a} kets of length {lay.dim_a}, got shape {a.shape}"
            )
        if b.ndim != 2 or b.shape != (lay.dim_b, lay.dim_b):
            raise IncompleteBasis(
                f"basis_b must hold {lay.dim_b} kets of length {lay.dim_b}, got shape {b.shape}"
            )
        if p.shape != (lay.dim_a, lay.dim_b):
            raise InvalidProbabilityTable(
                f"probability table must be {lay.dim_a}x{lay.dim_b}, got {p.shape}"
            )
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidProbabilityTable("probabilities must be finite and non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise InvalidProbabilityTable(f"probabilities sum to {p.sum():.15g}, not 1")
        if not _orthonormal_rows(a, 1e-10):
            raise IncompleteBasis("basis_a is not an orthonormal basis")
        if not _orthonormal_rows(b, 1e-10):
            raise IncompleteBasis("basis_b is not an orthonormal basis")
        for arr in (p, a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "basis_a", a)
        object.__setattr__(self, "basis_b", b)

    @property
    def projectors_a(self) -> list[np.ndarray]:
        return [np.outer(k, k.conj()) for k in self.basis_a]

    @property
    def projectors_b(self) -> list[np.ndarray]:
        return [np.outer(k, k.conj()) for k in self.basis_b]

    def product_basis(self) -> np.ndarray:
        """Unitary whose column ``m * N + n`` is ``|a_m> (x) |b_n>``."""
        return np.kron(self.basis_a.T, self.basis_b.T)


def build_classical_state(spec: ClassicalStateSpec) -> DensityMatrix:
    """``rho = sum_mn p_mn Pi_m^a (x) Pi_n^b``."""
    u = spec.product_basis()
    rho = (u * spec.probs.ravel()) @ dagger(u)
    return DensityMatrix(0.5 * (rho + dagger(rho)), spec.layout)


def _check_keep(keep: Iterable[int], party: Sequence[int], label: str) -> tuple[int, ...]:
    kept = tuple(sorted(set(int(k) for k in keep)))
    if not kept:
        raise EmptyKeepSet(f"{label} must name at least one factor")
    bad = [k for k in kept if k not in party]
    if bad:
        raise DimensionMismatch(f"{label} factors {bad} are not in party {tuple(party)}")
    return kept


def reduce(rho: DensityMatrix, keep_a: Iterable[int], keep_b: Iterable[int]) -> DensityMatrix:
    """Joint state of the kept factors of each party.

    Indices are global factor indices of ``rho.layout`` (0-based). The
    result's cut falls after the kept factors of party a.
    """
    lay = rho.layout
    ka = _check_keep(keep_a, lay.party_a, "keep_a")
    kb = _check_keep(keep_b, lay.party_b, "keep_b")
    m = partial_trace(rho.matrix, lay, ka + kb)
    new_layout = SubsystemLayout(tuple(lay.factor_dims[i] for i in ka + kb), len(ka))
    return DensityMatrix.unchecked(0.5 * (m + dagger(m)), new_layout)


def entropy_of_spectrum(values, floor: float | None = None) -> float:
    """``-sum w log2 w`` over eigenvalues above ``floor`` (default 1e-12)."""
    if floor is None:
        floor = get_tolerances().eig_floor
    return float(_backend.kernels().entropy_bits(np.asarray(values, dtype=float), floor))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits of a ``DensityMatrix`` or a raw matrix."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    w, _ = _backend.kernels().eigh(m)
    return entropy_of_spectrum(w)


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or not np.all(np.isfinite(p)) or np.any(p < 0):
        raise InvalidDistribution("distribution entries must be finite and non-negative")
    if abs(p.sum() - 1.0) > 1e-12:
        raise InvalidDistribution(f"distribution sums to {p.sum():.15g}, not 1")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def marginal_distributions(spec: ClassicalStateSpec) -> tuple[np.ndarray, np.ndarray]:
    """Row sums ``p^a`` and column sums ``p^b`` of the probability table."""
    return spec.probs.sum(axis=1), spec.probs.sum(axis=0)
