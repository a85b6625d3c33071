"""Shared constructions used across the test modules."""

import numpy as np
import pytest

from tailgraph import gaussian as gsn
from tailgraph import husler_reiss as hr
from tailgraph.graphs import Graph, clique_ordering


def hr_pair_model(clique, gamma):
    c = tuple(clique)
    m = np.array([[0.0, gamma], [gamma, 0.0]])
    return hr.HuslerReissModel(c, hr.VariogramMatrix(c, m))


def gauss_pair_model(clique, rho):
    c = tuple(clique)
    m = np.array([[1.0, rho], [rho, 1.0]])
    return gsn.GaussianCopulaModel(c, gsn.CorrelationMatrix(c, m))


def chain_correlation(rhos):
    """Markov path correlation: R[i,j] is the product of edge values."""
    d = len(rhos) + 1
    out = np.eye(d)
    for i in range(d):
        for j in range(d):
            if i != j:
                lo, hi = min(i, j), max(i, j)
                out[i, j] = np.prod(rhos[lo:hi])
    return out


@pytest.fixture(scope="session")
def hr_chain():
    """3-chain 1-2-3 of HR pairs with gamma = (1.3, 0.7), rooted at 1."""
    graph = Graph.make(3, [(1, 2), (2, 3)])
    ordering = clique_ordering(graph, 1)
    models = {(1, 2): hr_pair_model((1, 2), 1.3),
              (2, 3): hr_pair_model((2, 3), 0.7)}
    return ordering, models


@pytest.fixture(scope="session")
def gauss_chain():
    """4-chain of Gaussian-copula pairs from a Markov R with edge
    correlations (0.6, 0.5, 0.7), rooted at 1."""
    full = gsn.CorrelationMatrix((1, 2, 3, 4), chain_correlation([0.6, 0.5, 0.7]))
    graph = Graph.make(4, [(1, 2), (2, 3), (3, 4)])
    ordering = clique_ordering(graph, 1)
    models = {c: gsn.GaussianCopulaModel(c, full.sub(c)) for c in ordering.cliques}
    return ordering, models, full


MIXED_R = np.array([
    [1.00, 0.55, 0.45, 0.35],
    [0.55, 1.00, 0.50, 0.40],
    [0.45, 0.50, 1.00, 0.30],
    [0.35, 0.40, 0.30, 1.00],
])
MIXED_GAMMA = 1.1


def mixed_models():
    corr = gsn.CorrelationMatrix((2, 3, 4, 5), MIXED_R)
    return {(1, 2): hr_pair_model((1, 2), MIXED_GAMMA),
            (2, 3, 4, 5): gsn.GaussianCopulaModel((2, 3, 4, 5), corr)}


@pytest.fixture(scope="session")
def mixed_graph():
    """HR pair {1,2} glued at vertex 2 to a Gaussian 4-clique {2,3,4,5}."""
    graph = Graph.make(5, [(1, 2), (2, 3), (2, 4), (2, 5),
                           (3, 4), (3, 5), (4, 5)])
    return graph, mixed_models()
