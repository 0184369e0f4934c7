import numpy as np
import pytest

from pglearn.metrics import f_measure, nuclear_norm, objective_value
from pglearn.qp import build_factor_qp, signed_vecl
from pglearn.signals import MaskedData, MultidomainData

from conftest import random_data, random_laplacian


def graph_with_edges(n, edges, weight=1.0):
    """Laplacian whose support is exactly the given 1-based edge list."""
    L = np.zeros((n, n))
    for i, j in edges:
        L[i - 1, j - 1] = L[j - 1, i - 1] = -weight
        L[i - 1, i - 1] += weight
        L[j - 1, j - 1] += weight
    return L


class TestFMeasure:
    def test_identical(self, rng):
        L = random_laplacian(rng, 6)
        assert f_measure(L, L).f_measure == 1.0

    def test_partial_recovery(self):
        truth = graph_with_edges(3, [(1, 2), (2, 3)])
        est = graph_with_edges(3, [(1, 2)])
        score = f_measure(truth, est)
        assert score.precision == 1.0
        assert score.recall == 0.5
        assert score.f_measure == pytest.approx(2 / 3)

    def test_complete_vs_single_edge(self):
        truth = graph_with_edges(3, [(1, 2)])
        est = graph_with_edges(3, [(1, 2), (1, 3), (2, 3)])
        score = f_measure(truth, est)
        assert score.precision == pytest.approx(1 / 3)
        assert score.recall == 1.0
        assert score.f_measure == pytest.approx(0.5)

    def test_symmetric(self, rng):
        a = random_laplacian(rng, 5)
        b = random_laplacian(rng, 5)
        assert f_measure(a, b).f_measure == pytest.approx(f_measure(b, a).f_measure)

    def test_scale_invariant(self, rng):
        a = random_laplacian(rng, 5)
        b = random_laplacian(rng, 5)
        base = f_measure(a, b).f_measure
        assert f_measure(1000.0 * a, b).f_measure == base
        assert f_measure(a, 1e-3 * b).f_measure == base

    def test_empty_conventions(self):
        empty = np.zeros((3, 3))
        edge = graph_with_edges(3, [(1, 2)])
        both = f_measure(empty, empty)
        assert both.f_measure == 1.0
        est_empty = f_measure(edge, empty)
        assert est_empty.precision == 0.0
        assert est_empty.f_measure == 0.0
        true_empty = f_measure(empty, edge)
        assert true_empty.f_measure == 0.0

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            f_measure(np.zeros((2, 2)), np.zeros((3, 3)))


class TestObjectiveValue:
    def test_all_zero(self):
        data = MultidomainData(np.zeros((4, 2)), 2, 2)
        out = objective_value(data, np.zeros((2, 2)), np.zeros((2, 2)),
                              alpha=1.0, beta1=1.0, beta2=1.0, gamma_nuc=1.0)
        assert out.total == 0.0

    def test_complete_graph_frobenius_closed_form(self):
        # uniform complete graph on n=3 with trace 3: w = 1/2, degree 1,
        # ||L||^2 = n d^2 + n(n-1) w^2 = 3 + 6/4 = 4.5
        L = graph_with_edges(3, [(1, 2), (1, 3), (2, 3)], weight=0.5)
        data = MultidomainData(np.zeros((3, 1)), 3, 1)
        out = objective_value(data, L, np.zeros((1, 1)), alpha=1.0, beta1=1.0, beta2=0.0)
        assert out.frobenius == pytest.approx(4.5)
        assert np.trace(L) == pytest.approx(3.0)

    def test_matches_qp_objective(self, rng):
        data = random_data(rng, 3, 4, 5)
        alpha, b1, b2 = 1.3, 0.6, 0.9
        Lp = random_laplacian(rng, 3, normalized=True)
        Lq = random_laplacian(rng, 4, normalized=True)
        qp = build_factor_qp(data, alpha, b1, b2)
        z = np.concatenate([signed_vecl(Lp), signed_vecl(Lq)])
        out = objective_value(data, Lp, Lq, alpha=alpha, beta1=b1, beta2=b2)
        assert out.smoothness + out.frobenius == pytest.approx(qp.objective(z), rel=1e-10)

    def test_masked_requires_completed(self, rng):
        masked = MaskedData(np.ones((4, 2)), np.ones((4, 2)), 2, 2)
        with pytest.raises(ValueError):
            objective_value(masked, np.zeros((2, 2)), np.zeros((2, 2)),
                            alpha=1.0, beta1=1.0, beta2=1.0)

    def test_masked_data_fit_ignores_hidden(self, rng):
        y = rng.standard_normal((4, 3))
        mask = np.zeros((4, 3))
        mask[::2] = 1.0
        masked = MaskedData(y * mask, mask, 2, 2)
        X = rng.standard_normal((4, 3))
        out = objective_value(masked, np.zeros((2, 2)), np.zeros((2, 2)),
                              alpha=1.0, beta1=0.0, beta2=0.0,
                              completed=X)
        expected = float(np.sum((mask * (X - y * mask)) ** 2))
        assert out.data_fit == pytest.approx(expected)

    def test_nuclear_term(self, rng):
        data = random_data(rng, 3, 3, 2)
        out = objective_value(data, np.zeros((3, 3)), np.zeros((3, 3)),
                              alpha=1.0, beta1=0.0, beta2=0.0, gamma_nuc=2.0)
        expected = 2.0 * sum(nuclear_norm(data.snapshot(i)) for i in range(2))
        assert out.nuclear == pytest.approx(expected)
        assert out.smoothness == 0.0


def test_nuclear_norm_diagonal():
    assert nuclear_norm(np.diag([3.0, 0.5])) == pytest.approx(3.5)
