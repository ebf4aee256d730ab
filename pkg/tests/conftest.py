import numpy as np
import pytest

from pauli.sampling import random_dense_resource, random_density_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(20090101)


@pytest.fixture
def random_media(rng):
    """20 плотных сред при n=1 и 5 при n=2"""
    return [random_dense_resource(1, rng) for _ in range(20)] + [random_dense_resource(2, rng) for _ in range(5)]


@pytest.fixture
def random_state(rng):
    def make(n):
        return random_density_matrix(2 ** n, rng)
    return make
