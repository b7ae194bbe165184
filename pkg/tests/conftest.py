import math

import hypothesis
import numpy as np
import pytest

np.seterr(all="warn")

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")


def random_symmetric(n, rng, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return np.triu(a) + np.triu(a, 1).T


def random_coupling(n, rng, eps=None):
    """PD coupling J = I + eps K with K entries of variance 1/n."""
    eps = 0.2 / math.sqrt(n) if eps is None else eps
    while True:
        j = np.eye(n) + eps * random_symmetric(n, rng, 1.0 / math.sqrt(n))
        if np.linalg.eigvalsh(j)[0] > 0:
            return j


def random_temperatures(n, rng, d=0.74, mu=0.0):
    return np.exp(mu + d * rng.standard_normal(n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
