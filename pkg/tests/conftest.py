import numpy as np
import pytest

from pglearn.graphs import laplacian_from_weights, num_edges, trace_normalized
from pglearn.signals import MultidomainData


def random_laplacian(rng, n, density=0.6, normalized=False):
    """Random valid Laplacian with at least one edge."""
    while True:
        w = rng.uniform(0.2, 2.0, num_edges(n)) * (rng.random(num_edges(n)) < density)
        if w.sum() > 0:
            break
    L = laplacian_from_weights(w, n)
    return trace_normalized(L) if normalized else L


def random_data(rng, p, q, t):
    return MultidomainData(rng.standard_normal((p * q, t)), p, q)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
