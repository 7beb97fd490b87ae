"""Three-qubit classically correlated families and the random-state sampler.

Party a is qubits 0 and 1, party b is qubit 2 (cut after the second qubit).
The "hidden" correlations live in the reduction onto qubits 0 and 2.
"""
from __future__ import annotations

import dataclasses
import math
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple

import numpy as np

from .correlations import mid, mutual_information
from .errors import EmptyInput, ParameterOutOfRange
from .linalg import ket_to_projector
from .states import (
    ClassicalStateSpec,
    DensityMatrix,
    SubsystemLayout,
    build_classical_state,
    entropy_of_spectrum,
    reduce,
)

LAYOUT = SubsystemLayout.qubits(3, cut=2)
#: factors kept by the (1, 3) reduction, 0-based
KEEP_A = (0,)
KEEP_B = (2,)

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = (KET_0 + KET_1) / math.sqrt(2)
KET_MINUS = (KET_0 - KET_1) / math.sqrt(2)

_DEGENERATE_GAMMAS = (0.0, math.pi / 2, math.pi)


def canonical_kets_a() -> np.ndarray:
    """Rows |00>, |10>, |+1>, |-1> of the two-qubit basis for party a."""
    return np.array(
        [
            np.kron(KET_0, KET_0),
            np.kron(KET_1, KET_0),
            np.kron(KET_PLUS, KET_1),
            np.kron(KET_MINUS, KET_1),
        ]
    )


def canonical_basis_a() -> list[np.ndarray]:
    return [ket_to_projector(k) for k in canonical_kets_a()]


def computational_kets(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def binary_entropy(p: float) -> float:
    return sum(-q * math.log2(q) for q in (p, 1.0 - p) if q > 0)


@dataclasses.dataclass(frozen=True)
class AnalyticRecord:
    """Closed-form values for a family point; spectra are of the (1, 3) reduction."""

    mutual_info_ab: float
    mid_13: float
    post_measurement_spectrum: tuple[float, ...]
    reduced_spectrum: tuple[float, ...]


@dataclasses.dataclass(frozen=True, eq=False)
class FamilyPoint:
    family: str
    parameter: float
    spec: ClassicalStateSpec
    state: DensityMatrix
    analytic: AnalyticRecord | None
    #: parameter where a marginal spectrum degenerates; analytic MID may disagree here
    degenerate_parameter: bool = False

    def reduced(self) -> DensityMatrix:
        return reduce(self.state, KEEP_A, KEEP_B)


def _point(family, parameter, probs, kets_a, analytic, degenerate=False) -> FamilyPoint:
    spec = ClassicalStateSpec(np.asarray(probs, dtype=float), kets_a, computational_kets(2), LAYOUT)
    return FamilyPoint(family, float(parameter), spec, build_classical_state(spec), analytic, degenerate)


def family_alpha(alpha: float) -> FamilyPoint:
    """``alpha |000><000| + (1 - alpha) |101><101|``; its (1, 3) reduction stays classical."""
    if not 0.0 <= alpha <= 1.0:
        raise ParameterOutOfRange(f"alpha must lie in [0, 1], got {alpha}")
    probs = np.zeros((4, 2))
    probs[0, 0] = alpha
    probs[1, 1] = 1.0 - alpha
    spectrum = tuple(sorted((alpha, 1.0 - alpha, 0.0, 0.0), reverse=True))
    analytic = AnalyticRecord(binary_entropy(alpha), 0.0, spectrum, spectrum)
    return _point("alpha", alpha, probs, canonical_kets_a(), analytic)


def gamma_kets_a(gamma: float) -> np.ndarray:
    """Orthonormal party-a basis |00>, |psi 1>, |10>, |psi_perp 1>."""
    psi = math.cos(gamma) * KET_0 + math.sin(gamma) * KET_1
    perp = -math.sin(gamma) * KET_0 + math.cos(gamma) * KET_1
    return np.array(
        [np.kron(KET_0, KET_0), np.kron(psi, KET_1), np.kron(KET_1, KET_0), np.kron(perp, KET_1)]
    )


def family_gamma(gamma: float) -> FamilyPoint:
    """``1/2 |000><000| + 1/2 |psi 1 1><psi 1 1|`` with ``psi = cos g |0> + sin g |1>``.

    I(a, b) = 1 for every gamma. The qubit-2 marginal of the reduction is
    always maximally mixed, so MID uses the computational basis there.
    """
    if not 0.0 <= gamma <= math.pi:
        raise ParameterOutOfRange(f"gamma must lie in [0, pi], got {gamma}")
    probs = np.zeros((4, 2))
    probs[0, 0] = 0.5
    probs[1, 1] = 0.5
    c = abs(math.cos(gamma))
    hi, lo = (1 + c) / 4, (1 - c) / 4
    analytic = AnalyticRecord(
        1.0,
        binary_entropy((1 + c) / 2),
        (hi, hi, lo, lo),
        (0.5, 0.5, 0.0, 0.0),
    )
    degenerate = any(math.isclose(gamma, g, abs_tol=1e-9) for g in _DEGENERATE_GAMMAS)
    return _point("gamma", gamma, probs, gamma_kets_a(gamma), analytic, degenerate)


def lambda_c(lam: float) -> float:
    return math.sqrt(1 - 4 * lam + 5 * lam * lam)


def lambda_reduced_spectrum(lam: float) -> tuple[float, ...]:
    c = lambda_c(lam)
    return tuple(sorted((0.0, lam, (1 - lam + c) / 2, (1 - lam - c) / 2), reverse=True))


def lambda_post_spectrum(lam: float) -> tuple[float, ...]:
    return tuple(sorted((1 - 1.5 * lam, lam / 2, lam / 2, lam / 2), reverse=True))


def lambda_entropy_13(lam: float) -> float:
    """Closed-form S(1,3) of the reduced lambda state."""
    c = lambda_c(lam)
    return sum(-x * math.log2(x) for x in (lam, (1 - lam + c) / 2, (1 - lam - c) / 2) if x > 0)


def lambda_post_entropy_13(lam: float) -> float:
    """Closed-form S'(1,3) of the dephased reduced lambda state."""
    out = 1.0 - (2 - 3 * lam) / 2 * math.log2(2 - 3 * lam)
    if lam > 0:
        out -= 1.5 * lam * math.log2(lam)
    return out


def lambda_mid_13(lam: float) -> float:
    return lambda_post_entropy_13(lam) - lambda_entropy_13(lam)


def _lambda_point(lam: float) -> FamilyPoint:
    probs = np.zeros((4, 2))
    probs[0, 0] = 1 - 2 * lam
    probs[2, 0] = lam
    probs[3, 1] = lam
    analytic = AnalyticRecord(
        binary_entropy(lam), lambda_mid_13(lam), lambda_post_spectrum(lam), lambda_reduced_spectrum(lam)
    )
    return _point("lambda", lam, probs, canonical_kets_a(), analytic, degenerate=lam >= 0.5)


def family_lambda(lam: float) -> FamilyPoint:
    """``(1-2l)|000><000| + l(|+10><+10| + |-11><-11|)`` for ``0 <= l < 1/2``."""
    if not 0.0 <= lam < 0.5:
        raise ParameterOutOfRange(f"lambda must lie in [0, 0.5), got {lam}")
    return _lambda_point(lam)


def lambda_limit_point() -> FamilyPoint:
    """The lambda -> 1/2 endpoint, where MID(1,3) = I(a,b) = 1."""
    return _lambda_point(0.5)


FAMILIES = {"alpha": family_alpha, "gamma": family_gamma, "lambda": family_lambda}


def parameter_grid(family: str, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if family == "alpha":
        return np.linspace(0.0, 1.0, steps)
    if family == "gamma":
        return np.linspace(0.0, math.pi, steps)
    if family == "lambda":
        return np.linspace(0.0, 0.5, steps, endpoint=False)
    raise ValueError(f"unknown family {family!r}")


# -- random classical states -----------------------------------------------

CHUNK = 1024


class SamplePoint(NamedTuple):
    index: int
    I_ab: float
    mid_13: float
    degenerate: bool


def _chunk_probs(seed: int, chunk: int, size: int) -> np.ndarray:
    # uniform on the simplex: normalised unit-rate exponentials
    rng = np.random.default_rng([seed, chunk])
    e = rng.standard_exponential((size, 4, 2))
    return e / e.sum(axis=(1, 2), keepdims=True)


def random_classical_specs(n: int, seed: int) -> Iterator[ClassicalStateSpec]:
    """Classical specs on the canonical basis with uniformly random probability tables.

    Chunk ``k`` of 1024 draws uses the stream ``default_rng([seed, k])``, so
    any slice of the sequence can be regenerated independently.
    """
    kets_a = canonical_kets_a()
    kets_b = computational_kets(2)
    for chunk in range(math.ceil(n / CHUNK)):
        size = min(CHUNK, n - chunk * CHUNK)
        for p in _chunk_probs(seed, chunk, size):
            yield ClassicalStateSpec(p, kets_a, kets_b, LAYOUT)


def _evaluate(spec: ClassicalStateSpec) -> tuple[float, float, bool]:
    rho = build_classical_state(spec)
    m, degenerate = mid(reduce(rho, KEEP_A, KEEP_B))
    return mutual_information(rho), m, degenerate


def _sample_chunk(args) -> list[tuple[float, float, bool]]:
    seed, chunk, size = args
    kets_a = canonical_kets_a()
    kets_b = computational_kets(2)
    return [
        _evaluate(ClassicalStateSpec(p, kets_a, kets_b, LAYOUT))
        for p in _chunk_probs(seed, chunk, size)
    ]


def sample_random_classical(n: int, seed: int, workers: int = 1) -> Iterator[SamplePoint]:
    """(I(a,b), MID(1,3)) for ``n`` random classical states, in sample order.

    Output is identical for any ``workers`` count.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    jobs = [(seed, k, min(CHUNK, n - k * CHUNK)) for k in range(math.ceil(n / CHUNK))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_sample_chunk, jobs)
            idx = 0
            for chunk in results:
                for i_ab, m, deg in chunk:
                    yield SamplePoint(idx, i_ab, m, deg)
                    idx += 1
        return
    idx = 0
    for job in jobs:
        for i_ab, m, deg in _sample_chunk(job):
            yield SamplePoint(idx, i_ab, m, deg)
            idx += 1


class EnvelopeBin(NamedTuple):
    center: float
    lower: float
    upper: float
    max_mid: float
    count: int


def mid_upper_envelope(
    samples: Iterable, bins: int, i_max: float = 1.0
) -> list[EnvelopeBin]:
    """Per-bin maximum of MID over samples binned by I(a,b) on ``[0, i_max]``.

    Samples are ``(I, mid)`` pairs or :class:`SamplePoint`. Empty bins are
    omitted; values above ``i_max`` fall in the last bin.
    """
    if bins < 1:
        raise ValueError("bins must be at least 1")
    width = i_max / bins
    best: dict[int, float] = {}
    counts: dict[int, int] = {}
    for s in samples:
        if isinstance(s, SamplePoint):
            i_ab, m = s.I_ab, s.mid_13
        else:
            i_ab, m = s
        k = min(max(int(i_ab / width), 0), bins - 1)
        best[k] = max(best.get(k, -math.inf), m)
        counts[k] = counts.get(k, 0) + 1
    if not best:
        raise EmptyInput("no samples to bin")
    return [
        EnvelopeBin((k + 0.5) * width, k * width, (k + 1) * width, best[k], counts[k])
        for k in sorted(best)
    ]


def lambda_injection_points(steps: int, lam_max: float = 0.4999) -> list[tuple[float, float]]:
    """(I(a,b), MID(1,3)) along the lambda family from 0 up to ``lam_max``."""
    out = []
    for lam in np.linspace(0.0, lam_max, steps):
        point = family_lambda(float(lam))
        out.append((mutual_information(point.state), mid(point.reduced()).value))
    return out
