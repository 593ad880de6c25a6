import numpy as np
import pytest

INV_SQRT2 = 1 / np.sqrt(2)
ALPHA_MIN_F = np.sqrt(0.5 - np.sqrt(15) / 10)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_density(rng, dim, rank=None):
    rank = dim if rank is None else rank
    x = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (x + x.conj().T) / 2


ACCEPTANCE = []


def record(label, title, ok, detail=""):
    """Log one acceptance line; the terminal summary repeats them all."""
    line = "[%s] criterion %s: %s%s" % ("PASS" if ok else "FAIL", label, title,
                                       " (%s)" % detail if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
