"""Multidomain signal containers and graph smoothness quadratic forms.

A product-graph signal x of length N = P*Q corresponds to a P x Q matrix X
through column stacking, x = vec(X); entry X[p, q] sits at x[p + q*P]
(0-based). Columns of X live on the P-node factor graph and rows on the
Q-node factor graph.
"""

from dataclasses import dataclass

import numpy as np


def reshape_signal(x: np.ndarray, p: int, q: int) -> np.ndarray:
    """Reshape a product-graph signal of length p*q into its P x Q matrix
    form (column-stacking convention)."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != p * q:
        raise ValueError(f"signal has length {x.size}, expected p*q = {p * q}")
    return x.reshape((p, q), order="F")


def vec_signal(X: np.ndarray) -> np.ndarray:
    """Inverse of :func:`reshape_signal`: stack the columns of X."""
    return np.asarray(X, dtype=float).ravel(order="F")


def _frozen_array(a, dtype=float) -> np.ndarray:
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MultidomainData:
    """T product-graph signals, stored as the columns of an N x T matrix.

    Column i can be viewed either as an N-vector or, through
    :meth:`snapshot`, as a P x Q matrix (N = P*Q).
    """

    data: np.ndarray
    p: int
    q: int

    def __post_init__(self):
        data = _frozen_array(self.data)
        if data.ndim != 2:
            raise ValueError("data must be a 2-D (N, T) array")
        if self.p < 1 or self.q < 1:
            raise ValueError("factor sizes must be positive")
        if data.shape[0] != self.p * self.q:
            raise ValueError(
                f"data has {data.shape[0]} rows, expected p*q = {self.p * self.q}"
            )
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.p * self.q

    @property
    def t(self) -> int:
        return self.data.shape[1]

    def snapshot(self, i: int) -> np.ndarray:
        """The i-th signal as a P x Q matrix."""
        return reshape_signal(self.data[:, i], self.p, self.q)

    def tensor(self) -> np.ndarray:
        """All snapshots as a (T, P, Q) array."""
        return self.data.T.reshape(self.t, self.q, self.p).transpose(0, 2, 1)


@dataclass(frozen=True)
class MaskedData:
    """Partially observed multidomain data.

    ``mask`` is an N x T 0/1 matrix (1 = observed). Entries of ``y`` at
    unobserved positions carry no information and are ignored by every
    objective in the package.
    """

    y: np.ndarray
    mask: np.ndarray
    p: int
    q: int

    def __post_init__(self):
        y = _frozen_array(self.y)
        mask = _frozen_array(self.mask)
        if y.shape != mask.shape or y.ndim != 2:
            raise ValueError("y and mask must be 2-D arrays of equal shape")
        if y.shape[0] != self.p * self.q:
            raise ValueError(
                f"y has {y.shape[0]} rows, expected p*q = {self.p * self.q}"
            )
        if not np.all((mask == 0) | (mask == 1)):
            raise ValueError("mask must be binary (0/1)")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "mask", mask)

    @property
    def n(self) -> int:
        return self.p * self.q

    @property
    def t(self) -> int:
        return self.y.shape[1]

    def observed_fraction(self) -> float:
        return float(self.mask.mean())

    def zero_filled(self) -> MultidomainData:
        """Observed values with zeros at unobserved positions."""
        return MultidomainData(self.y * self.mask, self.p, self.q)


def _as_matrix(data) -> np.ndarray:
    if isinstance(data, MultidomainData):
        return data.data
    return np.asarray(data, dtype=float)


def smoothness_full(data, Ln: np.ndarray) -> float:
    """Total quadratic variation sum_i x_i^T L_N x_i on the product graph.

    Parameters
    ----------
    data : MultidomainData or (N, T) array
    Ln : np.ndarray
        Product-graph Laplacian of size N.
    """
    X = _as_matrix(data)
    Ln = np.asarray(Ln, dtype=float)
    if Ln.shape[0] != X.shape[0]:
        raise ValueError(f"Laplacian size {Ln.shape[0]} != signal length {X.shape[0]}")
    return float(np.sum(X * (Ln @ X)))


def scatter_matrices(data: MultidomainData) -> tuple[np.ndarray, np.ndarray]:
    """Accumulated second moments of the snapshots.

    Returns ``(S_P, S_Q)`` with ``S_P = sum_i X_i X_i^T`` (P x P) and
    ``S_Q = sum_i X_i^T X_i`` (Q x Q). These carry all the data dependence
    of both the factored smoothness form and the QP linear term.
    """
    Xs = data.tensor()
    s_p = np.einsum("tpq,trq->pr", Xs, Xs)
    s_q = np.einsum("tpq,tpr->qr", Xs, Xs)
    return s_p, s_q


def smoothness_factored(data: MultidomainData, Lp: np.ndarray, Lq: np.ndarray) -> float:
    """Total quadratic variation through the factor graphs.

    Computes sum_i [tr(X_i^T L_P X_i) + tr(X_i L_Q X_i^T)], which equals
    :func:`smoothness_full` with the Kronecker-sum Laplacian of (Lp, Lq),
    at O(T (P^2 Q + P Q^2)) cost instead of O(T N^2).
    """
    Lp = np.asarray(Lp, dtype=float)
    Lq = np.asarray(Lq, dtype=float)
    if Lp.shape[0] != data.p:
        raise ValueError(f"Lp size {Lp.shape[0]} != P = {data.p}")
    if Lq.shape[0] != data.q:
        raise ValueError(f"Lq size {Lq.shape[0]} != Q = {data.q}")
    s_p, s_q = scatter_matrices(data)
    return float(np.sum(s_p * Lp) + np.sum(s_q * Lq))
