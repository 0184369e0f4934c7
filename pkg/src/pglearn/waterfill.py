"""Explicit KKT solver for diagonal-Hessian QPs by multi-level water-filling.

For minimize 0.5 z^T diag(h) z + q^T z subject to C z = b, z >= 0 with
h > 0, the KKT conditions collapse to

    z_i(mu) = max(0, (c_i^T mu - q_i) / h_i),
    sum_i c_i z_i(mu) = b,

where mu collects the equality multipliers (the "water levels") and c_i is
the i-th column of C. The solver runs cyclic exact coordinate ascent on the
concave dual: each pass solves every scalar piecewise-linear water-level
equation (row of the system) by breakpoint sort, holding the other levels
fixed. The dual objective is nondecreasing under exact updates, and the
primal iterate z(mu) is nonnegative by construction at all times.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotConvergedError, UnboundedLevelError, ZeroCurvatureError
from .qp import StandardQP


@dataclass(frozen=True)
class WaterfillOptions:
    """Iteration controls for :func:`solve_waterfill`.

    ``damping`` scales each water-level move; it starts at the given value
    and drops to 0.5 automatically if the dual objective ever decreases.
    ``init`` selects the starting multipliers: "least-squares" solves the
    equality-constrained problem ignoring z >= 0 (cheap M x M system),
    "zeros" starts from mu = 0.
    """

    max_sweeps: int = 10_000
    tol_primal: float = 1e-8
    tol_kkt: float = 1e-8
    damping: float = 1.0
    init: str = "least-squares"

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.tol_primal <= 0 or self.tol_kkt <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if self.init not in ("least-squares", "zeros"):
            raise ValueError("init must be 'least-squares' or 'zeros'")


@dataclass(frozen=True)
class WaterfillResult:
    """Solution and convergence diagnostics.

    ``z`` is nonnegative entrywise exactly (clamped by the KKT formula, not
    post hoc). ``primal_trace`` and ``dual_trace`` hold the per-sweep
    equality residual and dual objective.
    """

    z: np.ndarray
    mu: np.ndarray
    sweeps_used: int
    primal_residual: float
    kkt_residual: float
    converged: bool
    primal_trace: np.ndarray
    dual_trace: np.ndarray


def _primal_from_levels(qp: StandardQP, mu: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, (qp.C.T @ mu - qp.q) / qp.hess_diag)


def _dual_objective(qp: StandardQP, mu: np.ndarray) -> float:
    u = np.maximum(0.0, qp.C.T @ mu - qp.q)
    return float(mu @ qp.b - 0.5 * np.sum(u * u / qp.hess_diag))


def kkt_residual(qp: StandardQP, z: np.ndarray, mu: np.ndarray) -> float:
    """Largest violation of stationarity-complementarity and dual
    feasibility at (z, mu): lam = h z + q - C^T mu must be >= 0 with
    lam_i z_i = 0."""
    lam = qp.hess_diag * z + qp.q - qp.C.T @ mu
    comp = float(np.max(np.abs(z * lam))) if z.size else 0.0
    dual_feas = float(max(0.0, -lam.min())) if lam.size else 0.0
    return max(comp, dual_feas)


def scalar_water_level(row: int, qp: StandardQP, mu: np.ndarray) -> float:
    """Exact solution of one scalar water-level equation.

    Solves sum_i C[row, i] * max(0, (c_i^T mu - q_i) / h_i) = b[row] for
    mu[row], all other multipliers held fixed. The left side is a
    nondecreasing piecewise-linear function of mu[row]; the equation is
    solved by sorting its breakpoints and locating the correct segment.

    Returns the new value of mu[row] (undamped).

    Raises
    ------
    UnboundedLevelError
        If the target b[row] lies outside the range of the piecewise-linear
        function, i.e. the row cannot be satisfied for any level.
    """
    C = qp.C
    h = qp.hess_diag
    cj = C[row]
    nz = np.flatnonzero(cj)
    if nz.size == 0:
        raise ValueError(f"constraint row {row} has no nonzero coefficient")
    c = cj[nz]
    hn = h[nz]
    if np.any(hn <= 0):
        raise ZeroCurvatureError(
            f"row {row} touches a variable with zero curvature; water-filling needs h > 0"
        )
    b = float(qp.b[row])
    # Contribution of the other multipliers to each slot's level.
    r = C[:, nz].T @ mu - c * mu[row]

    # Current value of the row's left side; if the row is already met
    # exactly (redundant or just-solved row), keep the level unchanged.
    cur = float(c @ np.maximum(0.0, (c * mu[row] + r - qp.q[nz]) / hn))
    if abs(cur - b) <= 1e-15 * (1.0 + abs(b)):
        return float(mu[row])

    # Each slot contributes s_i * max(0, m - theta_i) if c_i > 0 and
    # -s_i * max(0, theta_i - m) if c_i < 0, with slope s_i = c_i^2 / h_i
    # and breakpoint theta_i.
    theta = (qp.q[nz] - r) / c
    slope = c * c / hn
    order = np.argsort(theta)
    th = theta[order]
    sl = slope[order]
    pos = c[order] > 0

    pos_sl = np.where(pos, sl, 0.0)
    neg_sl = np.where(pos, 0.0, sl)
    active_pos = np.cumsum(pos_sl)                      # pos slots with theta <= th[k]
    val_pos = active_pos * th - np.cumsum(pos_sl * th)
    active_neg = np.cumsum(neg_sl[::-1])[::-1]          # neg slots with theta >= th[k]
    val_neg = np.cumsum((neg_sl * th)[::-1])[::-1] - active_neg * th
    phi = val_pos - val_neg

    k = int(np.searchsorted(phi, b, side="left"))
    if k == 0:
        if phi[0] == b:
            return float(th[0])
        slope_left = float(active_neg[0])
        if slope_left <= 0:
            raise UnboundedLevelError(
                f"row {row}: target {b} below the reachable range (min {phi[0]})"
            )
        return float(th[0] - (phi[0] - b) / slope_left)
    if k == th.size:
        slope_right = float(active_pos[-1])
        if slope_right <= 0:
            raise UnboundedLevelError(
                f"row {row}: target {b} above the reachable range (max {phi[-1]})"
            )
        return float(th[-1] + (b - phi[-1]) / slope_right)
    seg_slope = float(active_pos[k - 1] + active_neg[k])
    if seg_slope <= 0:
        # Flat segment can only be hit when phi == b there, handled above.
        return float(th[k])
    return float(th[k - 1] + (b - phi[k - 1]) / seg_slope)


def _initial_levels(qp: StandardQP, how: str) -> np.ndarray:
    if how == "zeros":
        return np.zeros(qp.num_constraints)
    # Equality-constrained solution without the z >= 0 bound:
    # (C diag(1/h) C^T) mu = b + C (q / h). lstsq tolerates redundant rows.
    Ch = qp.C / qp.hess_diag
    S = Ch @ qp.C.T
    rhs = qp.b + Ch @ qp.q
    mu, *_ = np.linalg.lstsq(S, rhs, rcond=None)
    if not np.all(np.isfinite(mu)):
        return np.zeros(qp.num_constraints)
    return mu


def solve_waterfill(
    qp: StandardQP,
    opts: WaterfillOptions | None = None,
    mu0: np.ndarray | None = None,
    check: bool = True,
) -> WaterfillResult:
    """Solve a strictly convex standard-form QP by water-filling.

    Parameters
    ----------
    qp : StandardQP
        Problem data; ``hess_diag`` must be strictly positive.
    opts : WaterfillOptions, optional
    mu0 : np.ndarray, optional
        Starting multipliers; overrides ``opts.init``.
    check : bool
        When True (default), raise :class:`NotConvergedError` if tolerances
        are not met within ``max_sweeps``; when False, return the result
        with ``converged=False``.

    Returns
    -------
    WaterfillResult

    Raises
    ------
    ZeroCurvatureError
        If any Hessian entry is zero (use the projected-gradient solver,
        possibly with a small ridge, for that case).
    UnboundedLevelError
        If some equality row is unsatisfiable (infeasible problem).
    NotConvergedError
        See ``check``.
    """
    if opts is None:
        opts = WaterfillOptions()
    if np.any(qp.hess_diag <= 0):
        raise ZeroCurvatureError(
            "hess_diag has a zero entry; the explicit water-filling update is undefined"
        )
    M = qp.num_constraints
    mu = np.array(mu0, dtype=float) if mu0 is not None else _initial_levels(qp, opts.init)
    if mu.shape != (M,):
        raise ValueError(f"mu0 has shape {mu.shape}, expected ({M},)")

    damping = opts.damping
    prev_dual = -np.inf
    primal_trace = []
    dual_trace = []
    sweeps = 0
    converged = False
    primal = np.inf
    kkt = np.inf
    for sweeps in range(1, opts.max_sweeps + 1):
        for j in range(M):
            target = scalar_water_level(j, qp, mu)
            mu[j] += damping * (target - mu[j])
        z = _primal_from_levels(qp, mu)
        primal = float(np.max(np.abs(qp.C @ z - qp.b)))
        dual = _dual_objective(qp, mu)
        primal_trace.append(primal)
        dual_trace.append(dual)
        if dual < prev_dual - 1e-12 * (1.0 + abs(prev_dual)):
            damping = min(damping, 0.5)
        prev_dual = dual
        if primal <= opts.tol_primal:
            kkt = kkt_residual(qp, z, mu)
            if kkt <= opts.tol_kkt:
                converged = True
                break

    z = _primal_from_levels(qp, mu)
    if not converged:
        kkt = kkt_residual(qp, z, mu)
    result = WaterfillResult(
        z=z,
        mu=mu.copy(),
        sweeps_used=sweeps,
        primal_residual=primal,
        kkt_residual=float(kkt),
        converged=converged,
        primal_trace=np.asarray(primal_trace),
        dual_trace=np.asarray(dual_trace),
    )
    if check and not converged:
        raise NotConvergedError(
            f"water-filling did not converge in {opts.max_sweeps} sweeps "
            f"(primal residual {primal:.3e}, kkt residual {kkt:.3e})",
            result=result,
        )
    return result
