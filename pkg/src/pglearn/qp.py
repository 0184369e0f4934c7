"""Standard-form QP assembly in the signed lower-triangle parametrization.

A symmetric n x n Laplacian candidate is encoded as a vector v of length
n(n+1)/2 in diagonal-and-lower column-major order: for column j, first
L[j, j], then -L[i, j] for i > j. Off-diagonals are stored negated so the
whole feasible region is described by v >= 0 plus linear equalities; all
sign bookkeeping lives in this module.

Each problem built here is

    minimize    0.5 z^T diag(h) z + q^T z
    subject to  C z = b,  z >= 0,

where z concatenates one signed block per factor. The equality system per
block consists of the n zero-row-sum constraints and the trace constraint
tr(L) = n; with the nonnegativity bounds these equalities encode exactly
the valid trace-normalized Laplacians.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .signals import MultidomainData, scatter_matrices


@lru_cache(maxsize=None)
def svecl_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(rows, cols) of the diagonal-and-lower slots in column-major order."""
    rows = []
    cols = []
    for j in range(n):
        for i in range(j, n):
            rows.append(i)
            cols.append(j)
    rows = np.asarray(rows, dtype=np.intp)
    cols = np.asarray(cols, dtype=np.intp)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def num_slots(n: int) -> int:
    """Length of the signed lower-triangle vector, n(n+1)/2."""
    return n * (n + 1) // 2


def signed_vecl(L: np.ndarray) -> np.ndarray:
    """Vectorize a symmetric matrix: diagonal entries as-is, strict-lower
    entries negated, column-major slot order."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    rows, cols = svecl_indices(n)
    v = L[rows, cols].copy()
    v[rows != cols] *= -1.0
    return v


def unvecl(v: np.ndarray, n: int | None = None) -> np.ndarray:
    """Inverse of :func:`signed_vecl`; returns an exactly symmetric matrix."""
    v = np.asarray(v, dtype=float).ravel()
    if n is None:
        n = round((np.sqrt(1 + 8 * v.size) - 1) / 2)
    if v.size != num_slots(n):
        raise ValueError(f"vector has length {v.size}, expected n(n+1)/2 = {num_slots(n)}")
    rows, cols = svecl_indices(n)
    vals = np.where(rows == cols, v, -v)
    L = np.zeros((n, n))
    L[rows, cols] = vals
    L[cols, rows] = vals
    return L


@dataclass(frozen=True)
class StandardQP:
    """Data of a diagonal-Hessian QP with equality constraints and z >= 0.

    ``blocks`` lists (n, slice) pairs locating each factor's signed
    lower-triangle segment inside z.
    """

    hess_diag: np.ndarray
    q: np.ndarray
    C: np.ndarray
    b: np.ndarray
    blocks: tuple[tuple[int, slice], ...]

    def __post_init__(self):
        h = np.asarray(self.hess_diag, dtype=float)
        q = np.asarray(self.q, dtype=float)
        C = np.asarray(self.C, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if h.shape != q.shape or h.ndim != 1:
            raise ValueError("hess_diag and q must be 1-D vectors of equal length")
        if C.shape != (b.size, h.size):
            raise ValueError(f"C has shape {C.shape}, expected ({b.size}, {h.size})")
        if np.any(h < 0):
            raise ValueError("hess_diag must be nonnegative")
        if C.size and not np.all(np.any(C != 0, axis=1)):
            raise ValueError("C must not contain an all-zero row")
        for arr, name in ((h, "hess_diag"), (q, "q"), (C, "C"), (b, "b")):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_vars(self) -> int:
        return self.q.size

    @property
    def num_constraints(self) -> int:
        return self.b.size

    def objective(self, z: np.ndarray) -> float:
        """0.5 z^T diag(h) z + q^T z."""
        z = np.asarray(z, dtype=float)
        return float(0.5 * np.dot(z, self.hess_diag * z) + np.dot(self.q, z))

    def split(self, z: np.ndarray) -> list[np.ndarray]:
        """Decode the solution vector into one Laplacian per block."""
        return [unvecl(z[sl], n) for n, sl in self.blocks]


def _block_hessian(n: int, beta: float) -> np.ndarray:
    # ||L||_F^2 counts each off-diagonal entry twice, hence multiplicity
    # 1 on diagonal slots and 2 on off-diagonal slots.
    rows, cols = svecl_indices(n)
    return np.where(rows == cols, 2.0 * beta, 4.0 * beta)


def _block_linear(G: np.ndarray, scale: float) -> np.ndarray:
    # Slot coefficients of scale * <G, L> for symmetric G, with the
    # off-diagonal sign flip folded in.
    G = np.asarray(G, dtype=float)
    rows, cols = svecl_indices(G.shape[0])
    return np.where(rows == cols, scale * G[rows, cols], -2.0 * scale * G[rows, cols])


def _block_constraints(n: int) -> tuple[np.ndarray, np.ndarray]:
    # n zero-row-sum rows followed by the trace row, over one block's slots.
    rows, cols = svecl_indices(n)
    slots = np.arange(rows.size)
    diag = rows == cols
    C = np.zeros((n + 1, rows.size))
    C[rows[diag], slots[diag]] = 1.0
    off = ~diag
    np.add.at(C, (rows[off], slots[off]), -1.0)
    np.add.at(C, (cols[off], slots[off]), -1.0)
    C[n, slots[diag]] = 1.0
    b = np.zeros(n + 1)
    b[n] = float(n)
    return C, b


def _assemble(block_defs) -> StandardQP:
    # block_defs: list of (n, hess_block, q_block)
    sizes = [num_slots(n) for n, _, _ in block_defs]
    K = int(np.sum(sizes))
    M = int(np.sum([n + 1 for n, _, _ in block_defs]))
    h = np.concatenate([hb for _, hb, _ in block_defs])
    q = np.concatenate([qb for _, _, qb in block_defs])
    C = np.zeros((M, K))
    b = np.zeros(M)
    blocks = []
    row0 = 0
    col0 = 0
    for n, _, _ in block_defs:
        Cb, bb = _block_constraints(n)
        C[row0:row0 + n + 1, col0:col0 + num_slots(n)] = Cb
        b[row0:row0 + n + 1] = bb
        blocks.append((n, slice(col0, col0 + num_slots(n))))
        row0 += n + 1
        col0 += num_slots(n)
    return StandardQP(hess_diag=h, q=q, C=C, b=b, blocks=tuple(blocks))


def build_factor_qp(data: MultidomainData, alpha: float, beta1: float, beta2: float) -> StandardQP:
    """QP whose minimizer gives both factor Laplacians in one solve.

    Objective encoded: alpha * sum_i [tr(X_i^T L_P X_i) + tr(X_i L_Q X_i^T)]
    + beta1 ||L_P||_F^2 + beta2 ||L_Q||_F^2 over valid trace-normalized
    Laplacian pairs. Variable count is (P^2 + P)/2 + (Q^2 + Q)/2.

    Parameters
    ----------
    data : MultidomainData
    alpha : float
        Smoothness weight, must be positive.
    beta1, beta2 : float
        Frobenius weights for the P- and Q-factor, nonnegative.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if beta1 < 0 or beta2 < 0:
        raise ValueError("beta weights must be nonnegative")
    s_p, s_q = scatter_matrices(data)
    return _assemble([
        (data.p, _block_hessian(data.p, beta1), _block_linear(s_p, alpha)),
        (data.q, _block_hessian(data.q, beta2), _block_linear(s_q, alpha)),
    ])


def build_single_qp(X: np.ndarray, alpha: float, beta: float) -> StandardQP:
    """QP for a single graph Laplacian over all N product nodes.

    Same construction as one block of :func:`build_factor_qp` applied to the
    raw N x T signal matrix; N(N+1)/2 variables and N+1 equality rows.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be an (N, T) matrix")
    n = X.shape[0]
    S = X @ X.T
    return _assemble([(n, _block_hessian(n, beta), _block_linear(S, alpha))])


def partial_traces(Ln: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Partial traces of a product-graph matrix.

    Returns ``(T_P, T_Q)`` where ``T_P = sum_q Ln[block qq]`` (P x P, the
    sum of the diagonal P x P blocks) and ``T_Q[a, b] = tr(Ln[block ab])``
    (Q x Q). They satisfy <Ln, I (x) A> = <T_P, A> and
    <Ln, B (x) I> = <T_Q, B>.
    """
    Ln = np.asarray(Ln, dtype=float)
    if Ln.shape != (p * q, p * q):
        raise ValueError(f"Ln has shape {Ln.shape}, expected ({p * q}, {p * q})")
    B = Ln.reshape(q, p, q, p)
    t_p = np.einsum("apaq->pq", B)
    t_q = np.einsum("apbp->ab", B)
    return t_p, t_q


def build_factorization_qp(Ln: np.ndarray, p: int, q: int) -> StandardQP:
    """QP minimizing ||Ln - L_P (+) L_Q||_F^2 over valid factor pairs.

    Expanding the norm, the cross term 2 tr(L_P) tr(L_Q) is constant (= 2PQ)
    on the feasible set, so the problem separates into two blocks with
    diagonal Hessian: curvature 2Q/4Q on the P block and 2P/4P on the Q
    block, and linear terms -2 <T_P, L_P> and -2 <T_Q, L_Q> from the
    partial traces of Ln. The dropped constant is ||Ln||_F^2 + 2PQ.
    """
    t_p, t_q = partial_traces(Ln, p, q)
    return _assemble([
        (p, _block_hessian(p, float(q)), _block_linear(t_p, -2.0)),
        (q, _block_hessian(q, float(p)), _block_linear(t_q, -2.0)),
    ])
