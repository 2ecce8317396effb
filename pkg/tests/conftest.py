import numpy as np
import pytest

from qds._random import haar_unitary, random_density, random_hermitian


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def hermitian(d, rng, scale=1.0):
    return random_hermitian(d, rng, scale)


def density(d, rng, rank=None):
    return random_density(d, rng, rank)


def unitary(d, rng):
    return haar_unitary(d, rng)


PAULI = {
    "1": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

LOWER = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |0><1|
RAISE = np.array([[0, 0], [1, 0]], dtype=np.complex128)  # |1><0|
