import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_density, random_hermitian
from hiddencorr.errors import DimensionMismatch, EmptyKeepSet, NotHermitian
from hiddencorr.linalg import allclose, hermitian_eig, partial_trace, tensor_product

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])
PLUS = np.full((2, 2), 0.5)


def brute_partial_trace(rho, dims, keep):
    """Explicit index sum, independent of the reshaping implementation."""
    n = len(dims)
    kept = sorted(keep)
    traced = [i for i in range(n) if i not in kept]
    d_keep = math.prod(dims[i] for i in kept)
    out = np.zeros((d_keep, d_keep), dtype=complex)
    strides = [math.prod(dims[i + 1:]) for i in range(n)]

    def flat(idx):
        return sum(i * s for i, s in zip(idx, strides))

    kept_ranges = [range(dims[i]) for i in kept]
    traced_ranges = [range(dims[i]) for i in traced]
    for r_k, row in enumerate(itertools.product(*kept_ranges)):
        for c_k, col in enumerate(itertools.product(*kept_ranges)):
            total = 0
            for t in itertools.product(*traced_ranges):
                ri = [0] * n
                ci = [0] * n
                for pos, k in enumerate(kept):
                    ri[k], ci[k] = row[pos], col[pos]
                for pos, k in enumerate(traced):
                    ri[k] = ci[k] = t[pos]
                total += rho[flat(ri), flat(ci)]
            out[r_k, c_k] = total
    return out


class TestTensorProduct:
    def test_identity(self):
        assert allclose(tensor_product(I2, I2), np.eye(4))

    def test_index_convention(self):
        m = tensor_product(P0, P1)
        expected = np.zeros((4, 4))
        expected[1, 1] = 1
        assert allclose(m, expected)

    def test_xx_flips_both(self):
        ket00 = np.array([1, 0, 0, 0])
        assert allclose(tensor_product(X, X) @ ket00, [0, 0, 0, 1])

    def test_associative_and_trace_multiplicative(self, rng):
        a, b, c = (random_hermitian(rng, n) for n in (2, 3, 2))
        assert allclose(tensor_product(tensor_product(a, b), c), tensor_product(a, tensor_product(b, c)), 1e-12)
        assert abs(np.trace(tensor_product(a, b)) - np.trace(a) * np.trace(b)) < 1e-12

    def test_allclose_tolerance_is_explicit(self):
        assert allclose(I2, I2 + 1e-11)
        assert not allclose(I2, I2 + 1e-9)
        assert allclose(I2, I2 + 1e-9, atol=1e-8)


class TestHermitianEig:
    def test_maximally_mixed(self, backend):
        s = hermitian_eig(I2 / 2)
        assert_allclose(s.eigenvalues, [0.5, 0.5], atol=1e-12)
        assert s.degeneracy_groups == ((0, 1),)
        assert allclose(s.eigenvectors, np.eye(2), 1e-12)

    def test_two_pure_states(self, backend):
        s = hermitian_eig((P0 + PLUS) / 2)
        # 1/2 (1 +- 1/sqrt 2)
        assert_allclose(s.eigenvalues, [0.853553390593273762, 0.146446609406726238], atol=1e-12)

    def test_diagonal(self, backend):
        s = hermitian_eig(np.diag([0.25, 0.75]))
        assert_allclose(s.eigenvalues, [0.75, 0.25], atol=1e-14)
        assert allclose(s.eigenvectors, [[0, 1], [1, 0]], 1e-12)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_degenerate_subspace_canonicalised(self, backend, rng):
        # a random unitary scrambles a 2-fold eigenspace; canonical vectors must not care
        u = np.kron(np.eye(2), np.linalg.qr(rng.normal(size=(2, 2)))[0])
        m = u @ np.diag([0.4, 0.4, 0.2, 0.0]) @ u.conj().T
        s = hermitian_eig(m)
        v = s.eigenvectors[:, :2]
        proj = v @ v.conj().T
        e0 = proj[:, 0] / np.linalg.norm(proj[:, 0])
        assert_allclose(v[:, 0], e0, atol=1e-10)
        assert s.degeneracy_groups[0] == (0, 1)

    def test_phase_is_fixed(self, backend):
        m = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
        s = hermitian_eig(m)
        for i in range(2):
            v = s.eigenvectors[:, i]
            first = v[np.argmax(np.abs(v) > 1e-8)]
            assert abs(first.imag) < 1e-14 and first.real > 0

    def test_reconstruction_random(self, backend, rng):
        for n in range(1, 9):
            for _ in range(20):
                m = random_hermitian(rng, n)
                s = hermitian_eig(m)
                assert np.max(np.abs(s.reconstruct() - m)) <= 1e-9
                v = s.eigenvectors
                assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10
                assert np.all(np.diff(s.eigenvalues) <= 0)

    def test_trace_equals_eigenvalue_sum(self, backend, rng):
        m = random_hermitian(rng, 8)
        assert abs(hermitian_eig(m).eigenvalues.sum() - np.trace(m).real) <= 1e-10

    def test_agrees_with_lapack(self, backend, rng):
        for _ in range(50):
            m = random_hermitian(rng, 8)
            assert_allclose(hermitian_eig(m).eigenvalues, np.linalg.eigvalsh(m)[::-1], atol=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(-1, 1), min_size=1, max_size=8), st.integers(0, 2**32 - 1))
    def test_reconstruction_with_forced_degeneracies(self, values, seed):
        # eigenvalues drawn from a coarse set force repeated eigenvalues
        rng = np.random.default_rng(seed)
        vals = np.round(np.asarray(values), 1)
        n = len(vals)
        q = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]
        m = (q * vals) @ q.conj().T
        s = hermitian_eig(m)
        assert np.max(np.abs(s.reconstruct() - m)) <= 1e-9


class TestPartialTrace:
    def test_product_state(self, rng):
        rho, sigma = random_density(rng, 2), random_density(rng, 3)
        assert allclose(partial_trace(np.kron(rho, sigma), [2, 3], [0]), rho, 1e-12)
        assert allclose(partial_trace(np.kron(rho, sigma), [2, 3], [1]), sigma, 1e-12)

    def test_bell_marginal(self):
        phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
        bell = np.outer(phi, phi)
        for keep in ([0], [1]):
            assert allclose(partial_trace(bell, [2, 2], keep), I2 / 2, 1e-12)

    def test_lambda_marginal_qubit_one(self):
        # rho^1 = (1 - 2l)|0><0| + l I at l = 1/4 has spectrum {3/4, 1/4}
        from hiddencorr.families import family_lambda

        rho = family_lambda(0.25).state.matrix
        r1 = partial_trace(rho, [2, 2, 2], [0])
        assert allclose(r1, np.diag([0.75, 0.25]), 1e-12)

    @pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 2), (3, 2), (2, 2, 2, 2)])
    def test_against_brute_force(self, rng, dims):
        rho = random_density(rng, math.prod(dims))
        for r in range(1, len(dims) + 1):
            for keep in itertools.combinations(range(len(dims)), r):
                got = partial_trace(rho, dims, keep)
                assert_allclose(got, brute_partial_trace(rho, dims, keep), atol=1e-13)
                assert abs(np.trace(got) - 1) <= 1e-12
                assert np.max(np.abs(got - got.conj().T)) <= 1e-13

    def test_one_factor_at_a_time(self, rng):
        rho = random_density(rng, 16)
        dims = [2, 2, 2, 2]
        direct = partial_trace(rho, dims, [1, 3])
        step = partial_trace(rho, dims, [0, 1, 3])  # trace factor 2
        step = partial_trace(step, [2, 2, 2], [1, 2])  # then factor 0
        assert np.max(np.abs(direct - step)) <= 1e-12

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            partial_trace(np.eye(4) / 4, [2, 3], [0])
        with pytest.raises(EmptyKeepSet):
            partial_trace(np.eye(4) / 4, [2, 2], [])
        with pytest.raises(DimensionMismatch):
            partial_trace(np.eye(4) / 4, [2, 2], [2])
