"""Combinatorial graph Laplacians and the Cartesian (Kronecker-sum) product.

Conventions used throughout the package:

- A graph on ``n`` nodes is stored as its dense combinatorial Laplacian
  ``L = diag(W 1) - W``, an ``(n, n)`` float ndarray, where ``W`` is the
  symmetric nonnegative weight matrix with zero diagonal.
- Edge-weight vectors follow strict-lower-triangle, column-major order:
  ``(2,1), (3,1), ..., (n,1), (3,2), ..., (n,n-1)`` in 1-based labels.
- Edge sets are Python sets of 1-based ``(i, j)`` pairs with ``i < j``,
  matching the on-disk JSON graph format.
- A Laplacian produced by a learner additionally satisfies ``tr(L) = n``;
  free-form Laplacians may carry any trace, and the validator reports the
  trace residual separately from the structural checks.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_TOL = 1e-8
DEFAULT_EDGE_THRESHOLD = 1e-4


@lru_cache(maxsize=None)
def lower_triangle_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (rows, cols) of the strict lower triangle of an n x n
    matrix in column-major order, i.e. (1,0), (2,0), ..., (n-1,n-2)."""
    cols, rows = np.triu_indices(n, k=1)
    rows = rows.copy()
    cols = cols.copy()
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def num_edges(n: int) -> int:
    """Number of node pairs, n(n-1)/2."""
    return n * (n - 1) // 2


def laplacian_from_weights(w: np.ndarray, n: int | None = None) -> np.ndarray:
    """Build the combinatorial Laplacian diag(W 1) - W from edge weights.

    Parameters
    ----------
    w : np.ndarray
        Vector of n(n-1)/2 nonnegative edge weights in strict-lower-triangle
        column-major order.
    n : int, optional
        Node count. Inferred from ``len(w)`` when omitted.

    Returns
    -------
    np.ndarray
        The (n, n) Laplacian. Row sums are zero and off-diagonals are
        nonpositive by construction (up to accumulation error ~n*eps).
    """
    w = np.asarray(w, dtype=float).ravel()
    if n is None:
        n = round((1 + np.sqrt(1 + 8 * w.size)) / 2)
    if w.size != num_edges(n):
        raise ValueError(
            f"weight vector has length {w.size}, expected n(n-1)/2 = {num_edges(n)} for n = {n}"
        )
    if np.any(w < 0):
        raise ValueError("edge weights must be nonnegative")
    rows, cols = lower_triangle_indices(n)
    W = np.zeros((n, n))
    W[rows, cols] = w
    W[cols, rows] = w
    return np.diag(W.sum(axis=1)) - W


def weights_from_laplacian(L: np.ndarray) -> np.ndarray:
    """Inverse of :func:`laplacian_from_weights`: read edge weights -L[i, j]
    off the strict lower triangle (column-major order)."""
    L = np.asarray(L, dtype=float)
    rows, cols = lower_triangle_indices(L.shape[0])
    return -L[rows, cols]


def cartesian_sum(Lp: np.ndarray, Lq: np.ndarray) -> np.ndarray:
    """Laplacian of the Cartesian product graph: I_Q (x) L_P + L_Q (x) I_P.

    Node (p, q) of the product maps to index p + q * P (0-based), so a
    product-graph signal x relates to its P x Q matrix form X by column
    stacking, x = vec(X).

    Parameters
    ----------
    Lp, Lq : np.ndarray
        Factor Laplacians of sizes P and Q.

    Returns
    -------
    np.ndarray
        The (P*Q, P*Q) Kronecker-sum Laplacian, entrywise identical to the
        dense evaluation of I_Q (x) L_P + L_Q (x) I_P.
    """
    Lp = np.asarray(Lp, dtype=float)
    Lq = np.asarray(Lq, dtype=float)
    p = Lp.shape[0]
    q = Lq.shape[0]
    out = np.zeros((p * q, p * q))
    for b in range(q):
        out[b * p:(b + 1) * p, b * p:(b + 1) * p] = Lp
    ii = np.arange(p)
    for qa in range(q):
        for qb in range(q):
            out[qa * p + ii, qb * p + ii] += Lq[qa, qb]
    return out


@dataclass(frozen=True)
class LaplacianDiagnostics:
    """Residuals reported by :func:`validate_laplacian`.

    ``ok`` covers the structural requirements (symmetry, zero row sums,
    nonpositive off-diagonals); the trace-normalization residual is reported
    and flagged separately because free-form Laplacians may carry any trace.
    """

    n: int
    max_row_sum_residual: float
    max_positive_offdiag: float
    trace_residual: float
    asymmetry: float
    ok: bool
    trace_ok: bool


def validate_laplacian(L: np.ndarray, tol: float = DEFAULT_TOL) -> LaplacianDiagnostics:
    """Check a matrix against the valid-Laplacian requirements.

    Parameters
    ----------
    L : np.ndarray
        Square matrix to check.
    tol : float
        Residual tolerance, must be positive.

    Returns
    -------
    LaplacianDiagnostics
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if L.shape != (n, n):
        raise ValueError("Laplacian must be square")
    asym = float(np.max(np.abs(L - L.T))) if n else 0.0
    row_sum = float(np.max(np.abs(L.sum(axis=1)))) if n else 0.0
    off = L[~np.eye(n, dtype=bool)]
    pos_off = float(max(0.0, off.max())) if off.size else 0.0
    trace_res = float(abs(np.trace(L) - n))
    ok = asym <= tol and row_sum <= tol and pos_off <= tol
    return LaplacianDiagnostics(
        n=n,
        max_row_sum_residual=row_sum,
        max_positive_offdiag=pos_off,
        trace_residual=trace_res,
        asymmetry=asym,
        ok=ok,
        trace_ok=trace_res <= tol,
    )


def edge_set(L: np.ndarray, threshold: float = DEFAULT_EDGE_THRESHOLD) -> set[tuple[int, int]]:
    """Edge support of a Laplacian-like matrix.

    A pair (i, j), i < j (1-based), is an edge iff -L[i, j] > threshold.

    Parameters
    ----------
    L : np.ndarray
        Square symmetric matrix.
    threshold : float
        Nonnegative cutoff separating numerical zeros from true edges.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    L = np.asarray(L, dtype=float)
    rows, cols = lower_triangle_indices(L.shape[0])
    keep = -L[rows, cols] > threshold
    return {(int(j) + 1, int(i) + 1) for i, j in zip(rows[keep], cols[keep])}


def trace_normalized(L: np.ndarray, target: float | None = None, tiny: float = 1e-12) -> np.ndarray:
    """Rescale L so its trace equals ``target`` (default: its size n).

    Matrices with (near-)zero trace are returned unchanged; there is no
    scale to normalize away.
    """
    L = np.asarray(L, dtype=float)
    tr = float(np.trace(L))
    if target is None:
        target = float(L.shape[0])
    if abs(tr) <= tiny:
        return L.copy()
    return L * (target / tr)
