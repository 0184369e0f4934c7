import numpy as np
import pytest

from pglearn.errors import NotConvergedError
from pglearn.projgrad import PGOptions, solve_projected_gradient
from pglearn.qp import StandardQP, build_factor_qp, build_single_qp
from pglearn.waterfill import solve_waterfill

from conftest import random_data


def simplex_qp():
    return StandardQP(
        hess_diag=np.ones(3),
        q=np.array([0.0, -1.0, -2.0]),
        C=np.ones((1, 3)),
        b=np.array([3.0]),
        blocks=(),
    )


def test_hand_instance():
    res = solve_projected_gradient(simplex_qp())
    np.testing.assert_allclose(res.z, [0.0, 1.0, 2.0], atol=1e-6)
    assert res.converged


def test_unique_feasible_point(rng):
    qp = build_single_qp(rng.standard_normal((2, 3)), 1.0, 0.3)
    res = solve_projected_gradient(qp)
    np.testing.assert_allclose(res.z, [1.0, 1.0, 1.0], atol=1e-6)


def test_zero_linear_term_gives_uniform_complete_graphs(rng):
    # q = 0: the minimizer of the Frobenius norm over each block is the
    # uniform complete graph, L = (n I - 11^T) / (n - 1).
    from pglearn.signals import MultidomainData

    data = MultidomainData(np.zeros((12, 4)), 3, 4)
    qp = build_factor_qp(data, 1.0, 0.9, 1.7)
    res = solve_projected_gradient(qp)
    Lp, Lq = qp.split(res.z)
    np.testing.assert_allclose(Lp, (3 * np.eye(3) - np.ones((3, 3))) / 2, atol=1e-6)
    np.testing.assert_allclose(Lq, (4 * np.eye(4) - np.ones((4, 4))) / 3, atol=1e-6)
    wf = solve_waterfill(qp)
    assert np.max(np.abs(res.z - wf.z)) <= 1e-5


def test_objective_nonincreasing(rng):
    qp = build_factor_qp(random_data(rng, 4, 3, 4), 1.0, 0.5, 0.5)
    res = solve_projected_gradient(qp)
    diffs = np.diff(res.objective_trace)
    assert np.all(diffs <= 1e-10 * (1.0 + np.abs(res.objective_trace[:-1])))


def test_backtracking_step_rule(rng):
    qp = build_factor_qp(random_data(rng, 3, 3, 3), 1.0, 0.5, 0.5)
    fixed = solve_projected_gradient(qp)
    bt = solve_projected_gradient(qp, PGOptions(step_rule="backtracking"))
    assert np.max(np.abs(fixed.z - bt.z)) <= 1e-5


def test_not_converged(rng):
    qp = build_factor_qp(random_data(rng, 4, 4, 3), 1.0, 0.5, 0.5)
    opts = PGOptions(max_iters=1, tol=1e-14)
    with pytest.raises(NotConvergedError):
        solve_projected_gradient(qp, opts)
    res = solve_projected_gradient(qp, opts, check=False)
    assert not res.converged


def test_feasible_output(rng):
    qp = build_factor_qp(random_data(rng, 5, 3, 4), 1.3, 0.7, 0.7)
    res = solve_projected_gradient(qp)
    assert np.all(res.z >= 0)
    assert np.max(np.abs(qp.C @ res.z - qp.b)) <= 1e-7
