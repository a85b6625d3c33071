"""Moment closed forms, tail-dependence estimates, convergence studies,
and regular-variation diagnostics."""

import numpy as np
import pytest
from scipy.stats import norm

from tailgraph import gaussian as gs
from tailgraph import husler_reiss as hr
from tailgraph.diagnostics import (
    chi_estimator,
    convergence_study,
    factorized_density,
    mrv_checks,
)
from tailgraph.errors import EmptySubset, QuantileOutOfRange
from tailgraph.graphs import Graph, clique_ordering
from tailgraph.limits import SampleMatrix, build_tail_model, tail_model_moments
from tailgraph.linalg import spd_inverse
from tailgraph.simulate import simulate_graphical

from conftest import MIXED_GAMMA, MIXED_R, hr_pair_model, mixed_models


def pair_ordering():
    return clique_ordering(Graph.make(2, [(1, 2)]), 1)


# ----------------------------------------------------- moment closed forms


def test_moments_all_hr_match_recursion(hr_chain):
    ordering, models = hr_chain
    mean, cov = tail_model_moments(build_tail_model(ordering, models, 1))
    mu = hr.tail_model_mean(ordering, models, 1)
    full = spd_inverse(hr.tail_model_precision(ordering, models, 1))
    assert np.allclose(mean.values, mu.values, atol=1e-14)
    assert np.allclose(cov.values, full.values, atol=1e-13)


def test_moments_all_gaussian_match_whole_graph_law(gauss_chain):
    ordering, models, full = gauss_chain
    mean, cov = tail_model_moments(build_tail_model(ordering, models, 1))
    law = gs.limit_law(full, 1)
    assert np.allclose(mean.values, 0.0, atol=1e-15)
    assert np.allclose(cov.values, law.cov.values, atol=1e-14)


def test_moments_mixed_block_diagonal(mixed_graph):
    graph, models = mixed_graph
    ordering = clique_ordering(graph, 1)
    mean, cov = tail_model_moments(build_tail_model(ordering, models, 1))
    rho = MIXED_R[0, 1:]
    expect = np.zeros((4, 4))
    expect[0, 0] = MIXED_GAMMA
    expect[1:, 1:] = 2.0 * np.outer(rho, rho) * (MIXED_R[1:, 1:]
                                                 - np.outer(rho, rho))
    assert np.allclose(mean.values, [-MIXED_GAMMA / 2, 0, 0, 0], atol=1e-14)
    assert np.allclose(cov.values, expect, atol=1e-14)


# ------------------------------------------------------- tail dependence


def test_chi_comonotone_is_one():
    vals = np.linspace(0.1, 5.0, 2001)
    s = SampleMatrix(columns=(1, 2, 3),
                     values=np.stack([vals, vals, vals], axis=1), meta={})
    for q in (0.5, 0.9, 0.99):
        assert chi_estimator(s, (1, 2, 3), q) == 1.0


def test_chi_independent_vanishes():
    rng = np.random.default_rng(0)
    s = SampleMatrix(columns=(1, 2),
                     values=rng.standard_exponential((200_000, 2)), meta={})
    assert abs(chi_estimator(s, (1, 2), 0.99) - 0.01) < 0.01


def test_chi_hr_pair_matches_copula_and_limit():
    model = hr_pair_model((1, 2), 1.0)
    s = simulate_graphical(pair_ordering(), {(1, 2): model}, 300_000, seed=17)
    chi_hat = chi_estimator(s, (1, 2), 0.99)
    xq = -np.log1p(-0.99)
    yq = hr.exp_to_frechet(xq)
    lam = hr.exponent_measure(model, np.array([yq, yq]))
    chi_exact = (1 - 2 * 0.99 + np.exp(-lam)) / 0.01
    chi_limit = 2 - 2 * norm.cdf(0.5)  # unit variogram
    assert abs(chi_hat - chi_exact) < 0.03
    assert abs(chi_hat - chi_limit) < 0.03
    assert abs(chi_exact - chi_limit) < 0.005  # fast finite-level bias decay


def test_chi_gaussian_decreases_with_level():
    rho = 0.8
    models = {(1, 2): gs.GaussianCopulaModel(
        (1, 2), gs.CorrelationMatrix((1, 2), [[1.0, rho], [rho, 1.0]]))}
    s = simulate_graphical(pair_ordering(), models, 1_000_000, seed=18)
    chis = [chi_estimator(s, (1, 2), q) for q in (0.99, 0.999, 0.9999)]
    assert chis[0] > chis[1] > chis[2]


def test_chi_argument_gates():
    models = {(1, 2): hr_pair_model((1, 2), 1.0)}
    s = simulate_graphical(pair_ordering(), models, 1000, seed=0)
    with pytest.raises(EmptySubset):
        chi_estimator(s, (), 0.9)
    with pytest.raises(QuantileOutOfRange):
        chi_estimator(s, (1, 2), 1.0)


# ----------------------------------------------------- convergence study


def test_convergence_study_hr_chain(hr_chain):
    ordering, models = hr_chain
    rep = convergence_study(ordering, models, 1, (2.0, 4.0, 6.0),
                            100_000, seed=5)
    assert rep.mode == "condition_on_root"
    assert rep.trend_ok()
    assert rep.final_pass()
    lines = rep.ks_csv().splitlines()
    assert lines[0] == "t,vertex,ks,n,threshold,pass"
    assert len(lines) == 1 + 3 * 3  # three levels, three vertices


def test_convergence_study_deterministic(hr_chain):
    ordering, models = hr_chain
    rep = convergence_study(ordering, models, 1, (2.0, 4.0), 10_000, seed=5)
    again = convergence_study(ordering, models, 1, (2.0, 4.0), 10_000, seed=5)
    assert rep.ks_csv() == again.ks_csv()
    assert rep.gaps_csv() == again.gaps_csv()


def test_convergence_study_auto_separator_mode(mixed_graph):
    graph, models = mixed_graph
    ordering = clique_ordering(graph, 1)
    rep = convergence_study(ordering, models, 3, (8.0, 20.0), 20_000, seed=6)
    assert rep.mode == "separator_based"


# ----------------------------------------------------- factorized density


def test_factorized_density_pair_closed_form():
    models = {(1, 2): hr_pair_model((1, 2), 1.0)}
    got = factorized_density(pair_ordering(), models, np.array([1.0, 1.0]))
    assert abs(got - norm.pdf(0.5)) < 1e-8
    y = np.array([0.7, 1.4])
    ref = norm.pdf(np.log(y[0] / y[1]) + 0.5) / (y[0] * y[1] ** 2)
    got = factorized_density(pair_ordering(), models, y)
    assert abs(got - ref) / ref < 1e-7


def triangle_plus_edge():
    graph = Graph.make(4, [(1, 2), (1, 3), (2, 3), (3, 4)])
    ordering = clique_ordering(graph, 1)
    v3 = np.array([[0.0, 1.0, 1.2], [1.0, 0.0, 0.8], [1.2, 0.8, 0.0]])
    models = {
        (1, 2, 3): hr.HuslerReissModel(
            (1, 2, 3), hr.VariogramMatrix((1, 2, 3), v3)),
        (3, 4): hr_pair_model((3, 4), 0.9),
    }
    return ordering, models


# ------------------------------------------------- regular-variation checks


def test_mrv_checks_pass_on_consistent_model():
    ordering, models = triangle_plus_edge()
    rep = mrv_checks(ordering, models, seed=0)
    assert rep.homogeneity_ok
    assert max(r.rel_err for r in rep.homogeneity) < 1e-4
    assert rep.compatibility_ok
    assert rep.ok


def test_mrv_singleton_separators_always_compatible():
    # the separator marginal of a single vertex is 1/y for every
    # variogram, so a mismatch across a cut vertex cannot be detected
    # by the separator-compatibility route
    ordering, models = triangle_plus_edge()
    bad = dict(models)
    bad[(3, 4)] = hr_pair_model((3, 4), 2.5)
    rep = mrv_checks(ordering, bad, seed=0)
    assert rep.compatibility_ok


def test_mrv_two_vertex_separator_mismatch_is_flagged():
    graph = Graph.make(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    ordering = clique_ordering(graph, 1)
    va = np.array([[0.0, 1.0, 1.2], [1.0, 0.0, 0.8], [1.2, 0.8, 0.0]])
    vb = np.array([[0.0, 1.6, 1.1], [1.6, 0.0, 1.3], [1.1, 1.3, 0.0]])
    models = {
        (1, 2, 3): hr.HuslerReissModel(
            (1, 2, 3), hr.VariogramMatrix((1, 2, 3), va)),
        (2, 3, 4): hr.HuslerReissModel(
            (2, 3, 4), hr.VariogramMatrix((2, 3, 4), vb)),
    }
    rep = mrv_checks(ordering, models, seed=0)
    assert not rep.compatibility_ok  # cliques disagree on the (2,3) margin
    assert max(r.gap for r in rep.compatibility) > 0.1

    vb_ok = vb.copy()
    vb_ok[0, 1] = vb_ok[1, 0] = va[1, 2]
    models[(2, 3, 4)] = hr.HuslerReissModel(
        (2, 3, 4), hr.VariogramMatrix((2, 3, 4), vb_ok))
    rep = mrv_checks(ordering, models, seed=0)
    assert rep.ok
