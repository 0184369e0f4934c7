"""Edge-recovery scoring and objective bookkeeping."""

from dataclasses import dataclass

import numpy as np

from .graphs import DEFAULT_EDGE_THRESHOLD, edge_set, trace_normalized
from .signals import MaskedData, MultidomainData, smoothness_factored


@dataclass(frozen=True)
class EdgeScore:
    """Precision/recall of an estimated edge set against the ground truth."""

    precision: float
    recall: float
    f_measure: float
    true_edges: int
    est_edges: int
    matched: int


def f_measure(
    L_true: np.ndarray,
    L_est: np.ndarray,
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> EdgeScore:
    """Score edge recovery of an estimated Laplacian.

    Both matrices are trace-normalized to trace n before thresholding, so
    the score is invariant to positive rescaling of either input. With
    precision = matched/estimated and recall = matched/true, the score is
    their harmonic mean; if both edge sets are empty the score is 1, and if
    exactly one is empty it is 0.
    """
    L_true = np.asarray(L_true, dtype=float)
    L_est = np.asarray(L_est, dtype=float)
    if L_true.shape != L_est.shape:
        raise ValueError(f"size mismatch: {L_true.shape} vs {L_est.shape}")
    true_edges = edge_set(trace_normalized(L_true), threshold)
    est_edges = edge_set(trace_normalized(L_est), threshold)
    matched = len(true_edges & est_edges)
    if not true_edges and not est_edges:
        return EdgeScore(1.0, 1.0, 1.0, 0, 0, 0)
    precision = matched / len(est_edges) if est_edges else 0.0
    recall = matched / len(true_edges) if true_edges else 0.0
    if precision + recall > 0:
        f = 2 * precision * recall / (precision + recall)
    else:
        f = 0.0
    return EdgeScore(precision, recall, f, len(true_edges), len(est_edges), matched)


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Weighted terms of the joint learning objective; total is their sum."""

    data_fit: float
    smoothness: float
    frobenius: float
    nuclear: float

    @property
    def total(self) -> float:
        return self.data_fit + self.smoothness + self.frobenius + self.nuclear


def nuclear_norm(M: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False).sum())


def objective_value(
    data,
    Lp: np.ndarray,
    Lq: np.ndarray,
    *,
    alpha: float,
    beta1: float,
    beta2: float,
    gamma_nuc: float = 0.0,
    completed: MultidomainData | np.ndarray | None = None,
) -> ObjectiveBreakdown:
    """Evaluate the joint objective term by term.

    Parameters
    ----------
    data : MultidomainData or MaskedData
        Observations. With :class:`MaskedData`, ``completed`` is required
        and the data-fit term sums squared errors over observed entries
        only.
    Lp, Lq : np.ndarray
        Factor Laplacians.
    alpha, beta1, beta2, gamma_nuc : float
        Weights of the smoothness, Frobenius, and nuclear terms.
    completed : optional
        Signal estimate X; defaults to the data itself for complete data.
    """
    Lp = np.asarray(Lp, dtype=float)
    Lq = np.asarray(Lq, dtype=float)
    if isinstance(data, MaskedData):
        if completed is None:
            raise ValueError("completed signals are required with masked data")
        X = completed.data if isinstance(completed, MultidomainData) else np.asarray(completed, dtype=float)
        data_fit = float(np.sum((data.mask * (X - data.y)) ** 2))
        xdata = MultidomainData(X, data.p, data.q)
    else:
        xdata = data if completed is None else (
            completed if isinstance(completed, MultidomainData)
            else MultidomainData(np.asarray(completed, dtype=float), data.p, data.q)
        )
        data_fit = float(np.sum((xdata.data - data.data) ** 2)) if completed is not None else 0.0
    smooth = alpha * smoothness_factored(xdata, Lp, Lq)
    frob = float(beta1 * np.sum(Lp * Lp) + beta2 * np.sum(Lq * Lq))
    if gamma_nuc > 0:
        nuc = gamma_nuc * float(
            sum(nuclear_norm(xdata.snapshot(i)) for i in range(xdata.t))
        )
    else:
        nuc = 0.0
    return ObjectiveBreakdown(data_fit, smooth, frob, nuc)
