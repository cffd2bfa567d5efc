import numpy as np
import pytest

from sixvertex import make_root_of_unity


@pytest.fixture
def root4():
    return make_root_of_unity(4)


@pytest.fixture
def root6():
    return make_root_of_unity(6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_point(rng, lo=0.5, hi=2.0):
    return (lo + (hi - lo) * rng.random()) * np.exp(2j * np.pi * rng.random())
