import numpy as np
import pytest

from hiddencorr import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run the test once per available kernel backend."""
    with _backend.use_backend(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# acceptance criteria register one line each; printed after the run
ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
