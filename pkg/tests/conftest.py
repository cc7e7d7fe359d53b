import numpy as np
import pytest

from hypervec import random_hv


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def make_hvs(rng, count, dim, domain):
    return [random_hv(dim, domain, rng) for _ in range(count)]


@pytest.fixture
def make():
    return make_hvs
