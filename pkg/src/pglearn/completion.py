"""Joint matrix completion and product-graph learning.

For incomplete observations, the signals X and the factor Laplacians are
estimated together by alternating minimization: with X fixed, the graphs
come from the one-step learner; with the graphs fixed, each snapshot is
completed by proximal gradient on

    || mask o (X - Y) ||_F^2 + alpha [tr(X^T L_P X) + tr(X L_Q X^T)]
    + gamma_nuc ||X||_*,

whose proximal step is singular-value thresholding. Both block updates
decrease the joint objective, so the outer objective trace is
nonincreasing (the coupled problem itself is nonconvex; no global-optimum
claim is made).
"""

from dataclasses import dataclass, replace

import numpy as np

from .learn import LearnConfig, learn_product_graph
from .metrics import ObjectiveBreakdown, objective_value
from .signals import MaskedData, MultidomainData, reshape_signal

_LMAX_INFLATION = 1e-6
_INNER_REL_TOL = 1e-12


@dataclass(frozen=True)
class CompletionConfig:
    """Weights and iteration controls for the completion subproblem.

    ``alpha`` may be left as None in joint runs, in which case
    :func:`alternate_joint` reuses the learner's smoothness weight (the two
    must agree for the shared objective to be well defined).
    """

    alpha: float | None = None
    gamma_nuc: float = 1.0
    inner_iters: int = 100
    outer_iters: int = 50
    tol_outer: float = 1e-4
    step_rule: str = "fixed"

    def __post_init__(self):
        if self.alpha is not None and self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.gamma_nuc < 0:
            raise ValueError("gamma_nuc must be nonnegative")
        if self.inner_iters < 1 or self.outer_iters < 1:
            raise ValueError("iteration caps must be >= 1")
        if self.tol_outer <= 0:
            raise ValueError("tol_outer must be positive")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError("step_rule must be 'fixed' or 'backtracking'")


def svt(M: np.ndarray, tau: float) -> np.ndarray:
    """Singular-value thresholding, the proximal operator of tau * ||.||_*.

    Soft-thresholds the singular values of M by tau.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    M = np.asarray(M, dtype=float)
    if tau == 0.0:
        return M.copy()
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    return (U * np.maximum(s - tau, 0.0)) @ Vt


def _lambda_max(A: np.ndarray, iters: int = 100, tol: float = 1e-10) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by power iteration."""
    n = A.shape[0]
    if n == 0:
        return 0.0
    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = A @ v
        norm = np.linalg.norm(w)
        if norm <= 1e-300:
            return 0.0
        v_new = w / norm
        lam_new = float(v_new @ (A @ v_new))
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            lam = lam_new
            break
        v = v_new
        lam = lam_new
    # Power iteration approaches from below; tiny inflation keeps the
    # Lipschitz estimate an upper bound.
    return lam * (1.0 + _LMAX_INFLATION)


def _snapshot_objective(X, Y, mask, Lp, Lq, alpha, gamma_nuc):
    fit = float(np.sum((mask * (X - Y)) ** 2))
    smooth = alpha * float(np.sum(X * (Lp @ X)) + np.sum(X * (X @ Lq)))
    nuc = gamma_nuc * float(np.linalg.svd(X, compute_uv=False).sum()) if gamma_nuc > 0 else 0.0
    return fit + smooth + nuc


def complete_signals(
    masked: MaskedData,
    Lp: np.ndarray,
    Lq: np.ndarray,
    cfg: CompletionConfig,
    x0: MultidomainData | None = None,
) -> MultidomainData:
    """Complete every snapshot by proximal gradient with the graphs fixed.

    The smooth part has gradient 2 mask o (X - Y) + 2 alpha (L_P X + X L_Q)
    and Lipschitz constant 2 + 2 alpha (lmax(L_P) + lmax(L_Q)); the fixed
    step is its reciprocal and each step ends with singular-value
    thresholding at step * gamma_nuc.

    Parameters
    ----------
    masked : MaskedData
    Lp, Lq : np.ndarray
        Factor Laplacians (fixed during completion).
    cfg : CompletionConfig
        ``cfg.alpha`` must be set.
    x0 : MultidomainData, optional
        Warm start; defaults to zero-filling the unobserved entries.
    """
    if cfg.alpha is None:
        raise ValueError("cfg.alpha must be set for standalone completion")
    alpha = float(cfg.alpha)
    Lp = np.asarray(Lp, dtype=float)
    Lq = np.asarray(Lq, dtype=float)
    lip = 2.0 + 2.0 * alpha * (_lambda_max(Lp) + _lambda_max(Lq))
    step = 1.0 / lip
    start = masked.zero_filled() if x0 is None else x0
    out = np.empty_like(masked.y)
    for i in range(masked.t):
        Y = reshape_signal(masked.y[:, i], masked.p, masked.q)
        m = reshape_signal(masked.mask[:, i], masked.p, masked.q)
        X = start.snapshot(i)
        obj = _snapshot_objective(X, Y, m, Lp, Lq, alpha, cfg.gamma_nuc)
        for _ in range(cfg.inner_iters):
            grad = 2.0 * m * (X - Y) + 2.0 * alpha * (Lp @ X + X @ Lq)
            t = step
            X_new = svt(X - t * grad, t * cfg.gamma_nuc)
            if cfg.step_rule == "backtracking":
                def smooth_part(Z):
                    return float(np.sum((m * (Z - Y)) ** 2)) + alpha * float(
                        np.sum(Z * (Lp @ Z)) + np.sum(Z * (Z @ Lq))
                    )
                g_x = smooth_part(X)
                while True:
                    d = X_new - X
                    if smooth_part(X_new) <= g_x + float(np.sum(grad * d)) + float(
                        np.sum(d * d)
                    ) / (2 * t) + 1e-15:
                        break
                    t *= 0.5
                    if t < 1e-18:
                        break
                    X_new = svt(X - t * grad, t * cfg.gamma_nuc)
            obj_new = _snapshot_objective(X_new, Y, m, Lp, Lq, alpha, cfg.gamma_nuc)
            if not np.isfinite(obj_new):
                raise FloatingPointError(
                    "completion objective became non-finite; check the step configuration"
                )
            X = X_new
            if abs(obj - obj_new) <= _INNER_REL_TOL * (1.0 + abs(obj)):
                obj = obj_new
                break
            obj = obj_new
        out[:, i] = X.ravel(order="F")
    return MultidomainData(out, masked.p, masked.q)


@dataclass(frozen=True)
class JointResult:
    """Output of :func:`alternate_joint`."""

    x: MultidomainData
    Lp: np.ndarray
    Lq: np.ndarray
    objective_trace: np.ndarray
    outer_iters_used: int
    converged: bool


def joint_objective(
    masked: MaskedData,
    Lp: np.ndarray,
    Lq: np.ndarray,
    x: MultidomainData,
    learn_cfg: LearnConfig,
    comp_cfg: CompletionConfig,
) -> ObjectiveBreakdown:
    """The shared objective tracked by the alternating scheme."""
    return objective_value(
        masked,
        Lp,
        Lq,
        alpha=learn_cfg.alpha,
        beta1=learn_cfg.beta1,
        beta2=learn_cfg.beta2,
        gamma_nuc=comp_cfg.gamma_nuc,
        completed=x,
    )


def alternate_joint(
    masked: MaskedData,
    learn_cfg: LearnConfig,
    comp_cfg: CompletionConfig,
) -> JointResult:
    """Alternate graph learning and signal completion on masked data.

    Signals are initialized by zero-filling the unobserved entries. Each
    outer iteration learns (L_P, L_Q) from the current signals, then
    completes the signals with the graphs fixed (warm-started), recording
    the joint objective after each half step. Iteration stops when the
    relative objective change falls below ``comp_cfg.tol_outer`` or after
    ``comp_cfg.outer_iters`` rounds.

    The learner runs on the raw (unnormalized) signals here: the objective
    must stay the same across half steps, and rescaling inside the learner
    would change the effective smoothness weight each round. The completion
    weight ``comp_cfg.alpha`` must equal ``learn_cfg.alpha`` (or be None to
    inherit it) for the same reason.
    """
    if np.any(masked.mask.sum(axis=0) == 0):
        raise ValueError("every snapshot needs at least one observed entry")
    if comp_cfg.alpha is None:
        comp_cfg = replace(comp_cfg, alpha=learn_cfg.alpha)
    elif comp_cfg.alpha != learn_cfg.alpha:
        raise ValueError(
            "comp_cfg.alpha and learn_cfg.alpha must agree (or leave "
            "comp_cfg.alpha unset) so the alternating steps share one objective"
        )
    lc = replace(learn_cfg, normalize_data=False)
    x = masked.zero_filled()
    trace = []
    Lp = Lq = None
    prev_total = np.inf
    converged = False
    outer = 0
    for outer in range(1, comp_cfg.outer_iters + 1):
        Lp, Lq = learn_product_graph(x, lc)
        trace.append(joint_objective(masked, Lp, Lq, x, lc, comp_cfg).total)
        x = complete_signals(masked, Lp, Lq, comp_cfg, x0=x)
        total = joint_objective(masked, Lp, Lq, x, lc, comp_cfg).total
        trace.append(total)
        if abs(prev_total - total) <= comp_cfg.tol_outer * (1.0 + abs(total)):
            converged = True
            break
        prev_total = total
    return JointResult(
        x=x,
        Lp=Lp,
        Lq=Lq,
        objective_trace=np.asarray(trace),
        outer_iters_used=outer,
        converged=converged,
    )
