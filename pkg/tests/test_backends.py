import math
import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_density, random_hermitian
from hiddencorr import _backend, _purepy
from hiddencorr.correlations import bloch_decomposition, mid, symmetric_discord
from hiddencorr.families import family_lambda
from hiddencorr.states import DensityMatrix, SubsystemLayout

compiled = pytest.mark.skipif("compiled" not in _backend.available(), reason="extension not built")


def test_python_always_available():
    assert "python" in _backend.available()


def test_use_backend_restores():
    before = _backend.name()
    with _backend.use_backend("python") as kern:
        assert kern is _purepy
        assert _backend.name() == "python"
    assert _backend.name() == before


def test_unknown_backend():
    with pytest.raises(ValueError):
        with _backend.use_backend("fortran"):
            pass


@pytest.mark.parametrize("choice", ["python", "nonsense"])
def test_environment_variable(choice):
    env = dict(os.environ, HIDDENCORR_BACKEND=choice)
    proc = subprocess.run(
        [sys.executable, "-c", "from hiddencorr import _backend; print(_backend.name())"],
        capture_output=True, text=True, env=env, check=False,
    )
    if choice == "python":
        assert proc.stdout.strip() == "python"
    else:
        assert proc.returncode != 0 and "HIDDENCORR_BACKEND" in proc.stderr


@compiled
class TestCompiledMatchesPython:
    @pytest.fixture(autouse=True)
    def core(self):
        from hiddencorr import _core

        self.core = _core

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 16])
    def test_eigh(self, rng, n):
        for _ in range(20):
            m = random_hermitian(rng, n)
            w, v = self.core.eigh(m)
            assert_allclose(np.sort(w), np.linalg.eigvalsh(m), atol=1e-10)
            assert_allclose((v * w) @ v.conj().T, m, atol=1e-10)
            assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-10)

    def test_eigh_degenerate(self, rng):
        q = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))[0]
        m = (q * np.array([1, 1, 1, 0.5, 0.5, 0, 0, 0])) @ q.conj().T
        w, v = self.core.eigh(m)
        assert_allclose(np.sort(w), [0, 0, 0, 0.5, 0.5, 1, 1, 1], atol=1e-12)
        assert_allclose((v * w) @ v.conj().T, m, atol=1e-10)

    def test_entropy(self, rng):
        for _ in range(10):
            w = rng.dirichlet(np.ones(8))
            w[rng.integers(8)] = 0
            assert_allclose(self.core.entropy_bits(w, 1e-12), _purepy.entropy_bits(w, 1e-12), atol=1e-14)

    def test_measured_mi(self, rng):
        for _ in range(50):
            ra, rb, corr = bloch_decomposition(random_density(rng, 4))
            angles = rng.uniform(0, math.pi, 2).tolist() + rng.uniform(0, 2 * math.pi, 2).tolist()
            ta, tb, pa, pb = angles
            assert_allclose(
                self.core.measured_mi(ra, rb, corr, ta, pa, tb, pb),
                _purepy.measured_mi(ra, rb, corr, ta, pa, tb, pb),
                atol=1e-13,
            )

    def test_grid_search(self, rng):
        thetas = np.linspace(0, math.pi, 24)
        phis = np.linspace(0, 2 * math.pi, 24, endpoint=False)
        for _ in range(10):
            ra, rb, corr = bloch_decomposition(random_density(rng, 4))
            got = self.core.grid_search(ra, rb, corr, thetas, phis)
            want = _purepy.grid_search(ra, rb, corr, thetas, phis)
            assert got[1:] == want[1:]
            assert_allclose(got[0], want[0], atol=1e-13)

    def test_pipeline_agrees(self, rng):
        layout = SubsystemLayout.qubits(2, 1)
        states = [DensityMatrix(random_density(rng, 4), layout) for _ in range(5)]
        states.append(family_lambda(0.3).reduced())
        for rho in states:
            with _backend.use_backend("compiled"):
                a = (mid(rho).value, symmetric_discord(rho))
            with _backend.use_backend("python"):
                b = (mid(rho).value, symmetric_discord(rho))
            assert_allclose(a, b, atol=1e-9)
