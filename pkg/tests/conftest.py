import numpy as np
import pytest

from qdist import haar_unitary, make_system, random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

SWAP_4 = np.array([[1, 0, 0, 0],
                   [0, 0, 1, 0],
                   [0, 1, 0, 0],
                   [0, 0, 0, 1]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_pair_system(d, seed):
    """Random traceless (drift, control) pair; almost surely controllable."""
    drift = random_hermitian(d, seed, traceless=True)
    control = random_hermitian(d, seed + 10_000, traceless=True)
    return make_system(drift=drift.matrix, unbounded=[control.matrix])


def random_density(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def conjugate_all(system, seed):
    """Rebuild a system with every generator conjugated by one Haar unitary."""
    u = haar_unitary(system.dim, seed)

    def conj(m):
        return u @ m @ u.conj().T

    drift = None if system.drift is None else conj(system.drift.matrix)
    bounded = [(conj(b.operator.matrix), b.cap) for b in system.bounded]
    unbounded = [conj(op.matrix) for op in system.unbounded]
    return make_system(drift=drift, bounded=bounded, unbounded=unbounded)
