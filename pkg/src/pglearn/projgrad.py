"""Reference projected-gradient solver for standard-form QPs.

Serves as the correctness oracle for the water-filling solver and as the
fallback when the Hessian has zero diagonal entries (after adding a small
ridge). The projection onto {Cz = b} intersected with {z >= 0} has no
closed form, so it is computed by Dykstra's alternating scheme between the
affine projection (through a precomputed pseudoinverse of C) and clipping
at zero. Built for accuracy, not speed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotConvergedError
from .qp import StandardQP

_DYKSTRA_MOVE_TOL = 1e-12
_STEP_RIDGE = 1e-12


@dataclass(frozen=True)
class PGOptions:
    """Iteration controls for :func:`solve_projected_gradient`.

    ``projection_iters`` bounds the Dykstra alternations per projection;
    near-degenerate active sets need several hundred, so the default is
    generous (the 1e-12 movement exit keeps typical projections cheap).
    """

    max_iters: int = 200_000
    tol: float = 1e-7
    projection_iters: int = 1000
    step_rule: str = "fixed"

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1 or self.projection_iters < 1:
            raise ValueError("iteration caps must be >= 1")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError("step_rule must be 'fixed' or 'backtracking'")


@dataclass(frozen=True)
class PGResult:
    z: np.ndarray
    iters_used: int
    stationarity_residual: float
    feasibility_residual: float
    converged: bool
    objective_trace: np.ndarray


def _dykstra(x0, affine_proj, iters):
    # Alternate affine projection and clipping; the clip comes last so the
    # returned point is exactly nonnegative.
    x = x0
    p = np.zeros_like(x0)
    r = np.zeros_like(x0)
    for _ in range(iters):
        y = affine_proj(x + p)
        p = x + p - y
        w = np.maximum(y + r, 0.0)
        r = y + r - w
        if np.max(np.abs(w - x)) <= _DYKSTRA_MOVE_TOL:
            return w
        x = w
    return x


def solve_projected_gradient(
    qp: StandardQP,
    opts: PGOptions | None = None,
    z0: np.ndarray | None = None,
    check: bool = True,
) -> PGResult:
    """Minimize the QP by projected gradient with Dykstra projections.

    Parameters
    ----------
    qp : StandardQP
    opts : PGOptions, optional
    z0 : np.ndarray, optional
        Starting point (projected onto the feasible set before use);
        defaults to the projection of the origin.
    check : bool
        When True, raise :class:`NotConvergedError` if tolerances are not
        met; when False, return the best iterate with ``converged=False``.
    """
    if opts is None:
        opts = PGOptions()
    h = qp.hess_diag
    q = qp.q
    C = qp.C
    b = qp.b
    pinv = np.linalg.pinv(C)

    def affine_proj(v):
        return v - pinv @ (C @ v - b)

    def project(v):
        return _dykstra(v, affine_proj, opts.projection_iters)

    lip = float(h.max()) + _STEP_RIDGE
    step = 1.0 / lip

    z = project(np.zeros(qp.num_vars) if z0 is None else np.asarray(z0, dtype=float))
    obj_trace = [qp.objective(z)]
    converged = False
    move_res = np.inf
    feas = np.inf
    iters = 0
    for iters in range(1, opts.max_iters + 1):
        g = h * z + q
        t = step
        z_new = project(z - t * g)
        if opts.step_rule == "backtracking":
            # Shrink until the quadratic upper bound at step t holds.
            f_z = qp.objective(z)
            while True:
                d = z_new - z
                if qp.objective(z_new) <= f_z + g @ d + (d @ d) / (2 * t) + 1e-15:
                    break
                t *= 0.5
                if t < 1e-18:
                    break
                z_new = project(z - t * g)
        move = float(np.max(np.abs(z_new - z)))
        move_res = move / t
        feas = float(np.max(np.abs(C @ z_new - b)))
        z = z_new
        obj_trace.append(qp.objective(z))
        if move_res <= opts.tol and feas <= opts.tol:
            converged = True
            break
        if move <= 1e-15 * (1.0 + float(np.max(np.abs(z)))):
            # Fixed point of the projected-gradient map at the projection's
            # accuracy limit; further iterations cannot improve feasibility.
            break

    result = PGResult(
        z=z,
        iters_used=iters,
        stationarity_residual=move_res,
        feasibility_residual=feas,
        converged=converged,
        objective_trace=np.asarray(obj_trace),
    )
    if check and not converged:
        raise NotConvergedError(
            f"projected gradient did not converge in {opts.max_iters} iterations "
            f"(stationarity {move_res:.3e}, feasibility {feas:.3e})",
            result=result,
        )
    return result
