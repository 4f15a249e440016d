import numpy as np
import pytest

from wqpe import backend


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Trigger JIT compilation once so timed tests measure steady-state cost.
    backend.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_hermitian(rng, dim, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2.0


def random_unitary(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng, n_qubits):
    dim = 1 << n_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return amps / np.linalg.norm(amps)
