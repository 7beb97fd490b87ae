"""Correlation measures: mutual information, measurement-induced disturbance
(MID) and symmetric discord, plus the inequality and commutativity checks
that hold for reductions of classically correlated states."""
from __future__ import annotations

import dataclasses
import enum
import math
from collections.abc import Iterable
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import _backend
from ._config import get_tolerances
from .errors import DimensionMismatch, UnsupportedDimension
from .linalg import dagger, hermitian_eig, partial_trace
from .states import (
    ClassicalStateSpec,
    DensityMatrix,
    build_classical_state,
    marginal_distributions,
    reduce,
    shannon_entropy,
    von_neumann_entropy,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class Provenance(enum.Enum):
    MARGINAL_EIGENPROJECTORS = "marginal-eigenprojectors"
    BLOCH_PARAMETERIZED = "bloch-parameterized"


def _check_projector_set(projs: tuple[np.ndarray, ...], label: str) -> None:
    d = projs[0].shape[0]
    total = sum(projs)
    if np.max(np.abs(total - np.eye(d))) > 1e-10:
        raise ValueError(f"{label} projectors do not sum to the identity")
    for i, p in enumerate(projs):
        for q in projs[i + 1 :]:
            if np.max(np.abs(p @ q)) > 1e-10:
                raise ValueError(f"{label} projectors are not mutually orthogonal")


@dataclasses.dataclass(frozen=True, eq=False)
class MeasurementPair:
    """A complete bi-local projective measurement ``{Pi_m^a (x) Pi_n^b}``."""

    projectors_a: tuple[np.ndarray, ...]
    projectors_b: tuple[np.ndarray, ...]
    provenance: Provenance = Provenance.MARGINAL_EIGENPROJECTORS
    #: (theta_a, phi_a, theta_b, phi_b) for Bloch-parameterised pairs
    angles: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        pa = tuple(np.asarray(p, dtype=complex) for p in self.projectors_a)
        pb = tuple(np.asarray(p, dtype=complex) for p in self.projectors_b)
        _check_projector_set(pa, "party a")
        _check_projector_set(pb, "party b")
        object.__setattr__(self, "projectors_a", pa)
        object.__setattr__(self, "projectors_b", pb)

    @classmethod
    def from_bloch(cls, theta_a, phi_a, theta_b, phi_b) -> MeasurementPair:
        """Qubit pair measuring along ``+-n(theta_a, phi_a)`` and ``+-n(theta_b, phi_b)``."""
        return cls(
            _bloch_projectors(theta_a, phi_a),
            _bloch_projectors(theta_b, phi_b),
            Provenance.BLOCH_PARAMETERIZED,
            (float(theta_a), float(phi_a), float(theta_b), float(phi_b)),
        )


def _bloch_projectors(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    n = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
    ns = sum(c * s for c, s in zip(n, PAULI))
    eye = np.eye(2, dtype=complex)
    return (eye + ns) / 2, (eye - ns) / 2


def bloch_angles(projector: np.ndarray) -> tuple[float, float]:
    """(theta, phi) of the Bloch vector of a rank-1 qubit projector."""
    n = [float(np.real(np.trace(projector @ s))) for s in PAULI]
    theta = math.acos(max(-1.0, min(1.0, n[2])))
    phi = math.atan2(n[1], n[0]) % (2 * math.pi)
    return theta, phi


class MidResult(NamedTuple):
    value: float
    degenerate: bool


@dataclasses.dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    satisfied: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclasses.dataclass(frozen=True)
class CorrelationReport:
    mutual_info: float
    classical_mutual_info: float
    mid: float
    symmetric_discord: float | None
    degenerate_marginal_flag: bool
    bound_checks: tuple[BoundCheck, ...] = ()

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["bound_checks"] = [
            dict(dataclasses.asdict(b), margin=b.margin) for b in self.bound_checks
        ]
        return d


def _bound(name: str, lhs: float, rhs: float) -> BoundCheck:
    return BoundCheck(name, float(lhs), float(rhs), bool(lhs <= rhs + get_tolerances().bound_slack))


def mutual_information(rho: DensityMatrix) -> float:
    """``S(a) + S(b) - S(a, b)`` across the layout cut, in bits."""
    return (
        von_neumann_entropy(rho.marginal_a())
        + von_neumann_entropy(rho.marginal_b())
        - von_neumann_entropy(rho.matrix)
    )


def marginal_measurement(rho: DensityMatrix) -> tuple[MeasurementPair, bool]:
    """Eigenprojectors of both marginals and whether either spectrum is degenerate.

    Degenerate eigenspaces use the canonical computational-basis-aligned
    eigenvectors, so the measurement is deterministic but convention-dependent.
    """
    spec_a = hermitian_eig(rho.marginal_a())
    spec_b = hermitian_eig(rho.marginal_b())
    meas = MeasurementPair(tuple(spec_a.projectors()), tuple(spec_b.projectors()))
    return meas, spec_a.is_degenerate or spec_b.is_degenerate


def dephase(rho: DensityMatrix, meas: MeasurementPair) -> DensityMatrix:
    """Post-measurement state ``sum_mn Pi_mn rho Pi_mn`` of an unread measurement."""
    lay = rho.layout
    if meas.projectors_a[0].shape[0] != lay.dim_a or meas.projectors_b[0].shape[0] != lay.dim_b:
        raise DimensionMismatch(
            f"measurement acts on dims ({meas.projectors_a[0].shape[0]}, "
            f"{meas.projectors_b[0].shape[0]}), state parties are ({lay.dim_a}, {lay.dim_b})"
        )
    out = np.zeros_like(rho.matrix)
    for pa in meas.projectors_a:
        for pb in meas.projectors_b:
            p = np.kron(pa, pb)
            out += p @ rho.matrix @ p
    return DensityMatrix.unchecked(0.5 * (out + dagger(out)), lay)


def mid(rho: DensityMatrix) -> MidResult:
    """Measurement-induced disturbance ``I(a, b) - I_C(a, b)`` in bits.

    ``I_C`` is the mutual information of the state dephased in the marginal
    eigenbases. ``degenerate`` is set when either marginal has a repeated
    eigenvalue, in which case the value depends on the basis convention.
    """
    meas, degenerate = marginal_measurement(rho)
    value = mutual_information(rho) - mutual_information(dephase(rho, meas))
    return MidResult(value, degenerate)


# -- symmetric discord -----------------------------------------------------


@dataclasses.dataclass(frozen=True)
class DiscordOptions:
    grid_points: int = 24
    #: stop refining once a Nelder-Mead round improves the objective by less than this
    tol: float = 1e-9
    max_rounds: int = 50
    #: also refine from the marginal eigenbasis, so the result never exceeds MID
    seed_marginal_basis: bool = True


class DiscordResult(NamedTuple):
    value: float
    angles: tuple[float, float, float, float]


def bloch_decomposition(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors and correlation tensor of a two-qubit operator."""
    eye = np.eye(2)
    ra = np.array([np.real(np.trace(m @ np.kron(s, eye))) for s in PAULI])
    rb = np.array([np.real(np.trace(m @ np.kron(eye, s))) for s in PAULI])
    corr = np.array([[np.real(np.trace(m @ np.kron(s, t))) for t in PAULI] for s in PAULI])
    return ra, rb, corr


def _refine(objective, x0: np.ndarray, f0: float, step: float, opts: DiscordOptions):
    x, fx = np.asarray(x0, dtype=float), f0
    for _ in range(opts.max_rounds):
        simplex = np.vstack([x, x + step * np.eye(4)])
        res = minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": opts.tol * 0.1, "maxiter": 20000},
        )
        gain = fx - res.fun
        if gain > 0:
            x, fx = res.x, float(res.fun)
        if gain < opts.tol:
            break
        step = max(step / 2, 1e-4)
    return x, fx


def symmetric_discord_details(rho: DensityMatrix, opts: DiscordOptions = DiscordOptions()) -> DiscordResult:
    """Symmetric discord with the optimal Bloch angles (theta_a, phi_a, theta_b, phi_b)."""
    lay = rho.layout
    if lay.dim_a != 2 or lay.dim_b != 2:
        raise UnsupportedDimension(
            f"symmetric discord needs single-qubit parties, got dims ({lay.dim_a}, {lay.dim_b})"
        )
    kern = _backend.kernels()
    ra, rb, corr = bloch_decomposition(rho.matrix)
    total = mutual_information(rho)
    g = opts.grid_points
    thetas = np.linspace(0.0, math.pi, g)
    phis = np.linspace(0.0, 2 * math.pi, g, endpoint=False)
    best, k, l = kern.grid_search(ra, rb, corr, thetas, phis)
    ka, kb = divmod(k, g), divmod(l, g)
    starts = [((thetas[ka[0]], phis[ka[1]], thetas[kb[0]], phis[kb[1]]), -best)]

    def objective(x):
        return -kern.measured_mi(ra, rb, corr, x[0], x[1], x[2], x[3])

    if opts.seed_marginal_basis:
        meas, _ = marginal_measurement(rho)
        x0 = bloch_angles(meas.projectors_a[0]) + bloch_angles(meas.projectors_b[0])
        starts.append((x0, objective(x0)))
    step = 0.5 * math.pi / (g - 1)
    best_x, best_f = None, math.inf
    for x0, f0 in starts:
        x, fx = _refine(objective, np.array(x0), f0, step, opts)
        if fx < best_f:
            best_x, best_f = x, fx
    return DiscordResult(total + best_f, tuple(float(v) for v in best_x))


def symmetric_discord(rho: DensityMatrix, opts: DiscordOptions = DiscordOptions()) -> float:
    """Minimum over local projective qubit measurements of ``I(a, b) - I'(a, b)``, in bits.

    Coarse grid over both Bloch spheres followed by Nelder-Mead refinement.
    Raises :class:`UnsupportedDimension` unless both parties are single qubits.
    """
    return symmetric_discord_details(rho, opts).value


# -- checks on classical states ----------------------------------------------


def _keep_sets(spec: ClassicalStateSpec, keep_a, keep_b):
    lay = spec.layout
    return tuple(sorted(set(keep_a))), tuple(sorted(set(keep_b))), lay.party_a, lay.party_b


def check_bounds(spec: ClassicalStateSpec, keep_a: Iterable[int], keep_b: Iterable[int]) -> list[BoundCheck]:
    """Evaluate the inequality chain relating a reduction's MID to the parent state.

    Checks, each with +1e-8 slack::

        0 <= M(ai,bj) <= I(ai,bj) <= min{I(ai,b), I(a,bj)} <= I(a,b) <= min{H(a), H(b)}
        M(ai,bj) <= min{S(ai), S(bj)}
        M(ai,bj) <= I(a,b)
    """
    ka, kb, pa, pb = _keep_sets(spec, keep_a, keep_b)
    rho = build_classical_state(spec)
    red = reduce(rho, ka, kb)
    m_ij = mid(red).value
    i_ij = mutual_information(red)
    i_ib = mutual_information(reduce(rho, ka, pb))
    i_aj = mutual_information(reduce(rho, pa, kb))
    i_ab = mutual_information(rho)
    h_a, h_b = (shannon_entropy(p) for p in marginal_distributions(spec))
    s_ai = von_neumann_entropy(red.marginal_a())
    s_bj = von_neumann_entropy(red.marginal_b())
    partial_min = min(i_ib, i_aj)
    return [
        _bound("0 <= M(ai,bj)", 0.0, m_ij),
        _bound("M(ai,bj) <= I(ai,bj)", m_ij, i_ij),
        _bound("I(ai,bj) <= min{I(ai,b),I(a,bj)}", i_ij, partial_min),
        _bound("min{I(ai,b),I(a,bj)} <= I(a,b)", partial_min, i_ab),
        _bound("I(a,b) <= min{H(a),H(b)}", i_ab, min(h_a, h_b)),
        _bound("M(ai,bj) <= min{S(ai),S(bj)}", m_ij, min(s_ai, s_bj)),
        _bound("M(ai,bj) <= I(a,b)", m_ij, i_ab),
    ]


def _pairwise_commute(ops: list[np.ndarray], tol: float) -> bool:
    for i, x in enumerate(ops):
        for y in ops[i + 1 :]:
            if np.max(np.abs(x @ y - y @ x)) >= tol:
                return False
    return True


def reduced_projectors(spec: ClassicalStateSpec, keep_a: Iterable[int], keep_b: Iterable[int]):
    """Partial traces ``rho_m^{ai}`` and ``rho_n^{bj}`` of the basis projectors.

    Only basis elements with non-zero marginal probability are returned,
    since the others never enter the reduced state.
    """
    ka, kb, pa, pb = _keep_sets(spec, keep_a, keep_b)
    lay = spec.layout
    p_a, p_b = marginal_distributions(spec)
    rel_a = [pa.index(k) for k in ka]
    rel_b = [pb.index(k) for k in kb]
    red_a = [partial_trace(P, lay.dims_a, rel_a) for P, w in zip(spec.projectors_a, p_a) if w > 0]
    red_b = [partial_trace(P, lay.dims_b, rel_b) for P, w in zip(spec.projectors_b, p_b) if w > 0]
    return red_a, red_b


def commutation_classicality(spec: ClassicalStateSpec, keep_a: Iterable[int], keep_b: Iterable[int]) -> bool:
    """Sufficient test for the reduction to be classical.

    True when the reduced basis projectors of each party pairwise commute
    (entrywise commutator below 1e-10). False does not imply the reduction
    carries quantum correlations.
    """
    red_a, red_b = reduced_projectors(spec, keep_a, keep_b)
    tol = get_tolerances().commutator
    return _pairwise_commute(red_a, tol) and _pairwise_commute(red_b, tol)


def correlation_report(
    rho: DensityMatrix,
    *,
    discord: bool = True,
    discord_opts: DiscordOptions = DiscordOptions(),
) -> CorrelationReport:
    """Mutual information, MID and (for qubit parties) symmetric discord of one state."""
    meas, degenerate = marginal_measurement(rho)
    total = mutual_information(rho)
    classical = mutual_information(dephase(rho, meas))
    m = total - classical
    ms = None
    if discord:
        ms = symmetric_discord(rho, discord_opts)
    checks = [_bound("0 <= MID", 0.0, m), _bound("MID <= I(a,b)", m, total)]
    if ms is not None:
        checks.append(_bound("0 <= M_S", 0.0, ms))
        if not degenerate:
            checks.append(BoundCheck("M_S <= MID", ms, m, bool(ms <= m + 1e-6)))
    return CorrelationReport(total, classical, m, ms, degenerate, tuple(checks))
