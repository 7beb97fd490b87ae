"""Dense complex linear algebra on small tensor-product spaces.

Operators are plain ``numpy`` complex arrays. Tensor factors are ordered
with factor 0 most significant, so ``|q0 q1 q2>`` is basis index
``4*q0 + 2*q1 + q2``.
"""
from __future__ import annotations

import dataclasses
import functools
import math
from collections.abc import Iterable, Sequence

import numpy as np

from . import _backend
from ._config import get_tolerances
from .errors import DimensionMismatch, EmptyKeepSet, NotHermitian

#: default absolute tolerance for matrix equality
ATOL = 1e-10
MAX_DIM = 64


def allclose(a, b, atol: float = ATOL) -> bool:
    """Entrywise comparison with an explicit absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def ket_to_projector(ket) -> np.ndarray:
    v = np.asarray(ket, dtype=complex).ravel()
    return np.outer(v, v.conj())


def tensor_product(*ops) -> np.ndarray:
    """Kronecker product of one or more operators (or kets), left factor most significant."""
    if not ops:
        raise ValueError("tensor_product needs at least one factor")
    return functools.reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def hermiticity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def _check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")


def _check_hermitian(m: np.ndarray, tol: float | None) -> None:
    _check_square(m)
    if tol is None:
        tol = get_tolerances().hermitian
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"max |m - m^dagger| = {err:.3e} exceeds {tol:.1e}")


@dataclasses.dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` are sorted descending and ``eigenvectors`` holds the
    matching orthonormal columns. Eigenvalues within a degeneracy group
    are replaced by the group mean.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_groups: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def is_degenerate(self) -> bool:
        return any(len(g) > 1 for g in self.degeneracy_groups)

    def projectors(self) -> list[np.ndarray]:
        """Rank-1 projectors ``|v_i><v_i|`` in eigenvalue order."""
        return [ket_to_projector(self.eigenvectors[:, i]) for i in range(self.dim)]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _group_indices(values: np.ndarray, gap_tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, val in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - val) < gap_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _canonical_group_basis(vecs: np.ndarray, threshold: float) -> np.ndarray:
    """Basis of span(vecs) built from projected computational basis vectors.

    Walks e_0, e_1, ... in order, projects each onto the eigenspace,
    Gram-Schmidt orthogonalises against the vectors already accepted and
    keeps it if the residual norm exceeds ``threshold``. For a single vector
    this just fixes the global phase.
    """
    n, k = vecs.shape
    proj = vecs @ dagger(vecs)
    basis: list[np.ndarray] = []
    for idx in range(n):
        if len(basis) == k:
            break
        u = proj[:, idx].copy()
        for _ in range(2):  # second pass restores orthogonality lost to cancellation
            for b in basis:
                u -= b * np.vdot(b, u)
        norm = np.linalg.norm(u)
        if norm > threshold:
            basis.append(u / norm)
    if len(basis) < k:
        # only reachable with pathological thresholds; complete from the raw vectors
        for j in range(k):
            if len(basis) == k:
                break
            u = vecs[:, j].copy()
            for b in basis:
                u -= b * np.vdot(b, u)
            norm = np.linalg.norm(u)
            if norm > 1e-12:
                basis.append(u / norm)
    return np.column_stack(basis)


def hermitian_eig(m, gap_tol: float | None = None, *, hermitian_tol: float | None = None) -> Spectrum:
    """Deterministic spectral decomposition with canonicalised degenerate eigenspaces.

    Raises :class:`NotHermitian` when ``m`` deviates from its adjoint by more
    than ``hermitian_tol`` (default 1e-9).
    """
    m = np.asarray(m, dtype=complex)
    _check_hermitian(m, hermitian_tol)
    tol = get_tolerances()
    if gap_tol is None:
        gap_tol = tol.gap
    w, v = _backend.kernels().eigh(m)
    order = np.argsort(-w, kind="stable")
    w = np.asarray(w, dtype=float)[order]
    v = np.asarray(v)[:, order]
    groups = _group_indices(w, gap_tol)
    values = w.copy()
    vectors = np.empty_like(v)
    for g in groups:
        values[g] = w[g].mean()
        vectors[:, g] = _canonical_group_basis(v[:, g], tol.canon_threshold)
    return Spectrum(values, vectors, tuple(tuple(g) for g in groups))


def eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, descending, without the canonicalisation work."""
    m = np.asarray(m, dtype=complex)
    _check_square(m)
    w, _ = _backend.kernels().eigh(m)
    return np.sort(np.asarray(w, dtype=float))[::-1]


def _normalise_keep(keep: Iterable[int], n_factors: int) -> tuple[int, ...]:
    kept = sorted(set(int(k) for k in keep))
    if not kept:
        raise EmptyKeepSet("keep must name at least one factor")
    if kept[0] < 0 or kept[-1] >= n_factors:
        raise DimensionMismatch(f"keep indices {kept} out of range for {n_factors} factors")
    return tuple(kept)


def partial_trace(rho, layout, keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    ``layout`` is either a sequence of factor dimensions or an object with a
    ``factor_dims`` attribute. Kept factors stay in their original order.
    """
    dims: Sequence[int] = tuple(getattr(layout, "factor_dims", layout))
    rho = np.asarray(rho, dtype=complex)
    _check_square(rho)
    total = int(math.prod(dims))
    if rho.shape[0] != total:
        raise DimensionMismatch(f"matrix dimension {rho.shape[0]} != product of factor dims {total}")
    n = len(dims)
    kept = _normalise_keep(keep, n)
    t = rho.reshape(tuple(dims) * 2)
    row = list(range(n))
    col = [i if i not in kept else n + i for i in range(n)]
    out = [i for i in kept] + [n + i for i in kept]
    d = int(math.prod([dims[i] for i in kept]))
    return np.einsum(t, row + col, out).reshape(d, d)
