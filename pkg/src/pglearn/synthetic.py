"""Synthetic generators: community factor graphs, smooth product-graph
signals, and random observation masks.

All randomness flows from explicit integer seeds through numpy's PCG64
generator, so every artifact is reproducible across runs and platforms.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import GenerationError
from .graphs import laplacian_from_weights, lower_triangle_indices, num_edges
from .signals import MaskedData, MultidomainData

MAX_GRAPH_ATTEMPTS = 1000
EIG_CUTOFF = 1e-9


@dataclass(frozen=True)
class CommunityGraphConfig:
    """Parameters of the weighted community-graph generator.

    Nodes are split into ``k`` near-equal groups; each within-group pair is
    connected with probability ``p_in`` and each cross-group pair with
    ``p_out``; edge weights are uniform on [weight_low, weight_high].
    """

    n: int
    k: int = 2
    p_in: float = 0.7
    p_out: float = 0.05
    weight_low: float = 0.5
    weight_high: float = 1.5
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")
        if not 0 <= self.p_out <= self.p_in <= 1:
            raise ValueError("need 0 <= p_out <= p_in <= 1")
        if not 0 < self.weight_low <= self.weight_high:
            raise ValueError("need 0 < weight_low <= weight_high")


def _community_labels(n: int, k: int) -> np.ndarray:
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    return np.repeat(np.arange(k), sizes)


def _is_connected(w: np.ndarray, n: int) -> bool:
    if n <= 1:
        return True
    rows, cols = lower_triangle_indices(n)
    keep = w > 0
    adj = csr_matrix(
        (np.ones(int(keep.sum())), (rows[keep], cols[keep])), shape=(n, n)
    )
    ncomp, _ = connected_components(adj, directed=False)
    return ncomp == 1


def community_graph(cfg: CommunityGraphConfig) -> np.ndarray:
    """Draw a connected weighted community graph and return its Laplacian.

    Each attempt uses a fresh child stream of the configured seed; draws are
    repeated until the sampled graph is connected.

    Raises
    ------
    GenerationError
        If no connected draw appears within 1000 attempts (the parameters
        make connectivity too improbable).
    """
    n = cfg.n
    labels = _community_labels(n, cfg.k)
    rows, cols = lower_triangle_indices(n)
    probs = np.where(labels[rows] == labels[cols], cfg.p_in, cfg.p_out)
    for child in np.random.SeedSequence(cfg.seed).spawn(MAX_GRAPH_ATTEMPTS):
        rng = np.random.default_rng(child)
        u = rng.random(num_edges(n))
        wts = rng.uniform(cfg.weight_low, cfg.weight_high, num_edges(n))
        w = np.where(u < probs, wts, 0.0)
        if _is_connected(w, n):
            return laplacian_from_weights(w, n)
    raise GenerationError(
        f"no connected graph in {MAX_GRAPH_ATTEMPTS} attempts "
        f"(n={n}, k={cfg.k}, p_in={cfg.p_in}, p_out={cfg.p_out})"
    )


def sample_smooth_signals(
    Ln: np.ndarray,
    t: int,
    p: int,
    q: int,
    sigma: float = 0.0,
    seed: int = 0,
    eig_cutoff: float = EIG_CUTOFF,
) -> MultidomainData:
    """Draw signals smooth on the given product graph.

    Eigendecompose Ln = V diag(lam) V^T and draw each snapshot as
    x = V h + sigma * g, where h_j is zero-mean Gaussian with variance
    1/lam_j on the non-null eigendirections (lam_j > eig_cutoff) and zero
    on the null space, and g is standard normal noise.

    Parameters
    ----------
    Ln : np.ndarray
        Product-graph Laplacian of size p*q (must be symmetric).
    t : int
        Number of snapshots, >= 1.
    p, q : int
        Factor sizes of the product graph (fix the matrix view).
    sigma : float
        Noise standard deviation, >= 0.
    seed : int
    """
    Ln = np.asarray(Ln, dtype=float)
    n = p * q
    if Ln.shape != (n, n):
        raise ValueError(f"Ln has shape {Ln.shape}, expected ({n}, {n})")
    if not np.allclose(Ln, Ln.T, rtol=0.0, atol=1e-10):
        raise ValueError("Ln must be symmetric")
    if t < 1:
        raise ValueError("t must be >= 1")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    lam, V = np.linalg.eigh(Ln)
    sd = np.where(lam > eig_cutoff, 1.0 / np.sqrt(np.maximum(lam, eig_cutoff)), 0.0)
    rng = np.random.default_rng(seed)
    H = rng.standard_normal((n, t)) * sd[:, None]
    X = V @ H
    if sigma > 0:
        X += sigma * rng.standard_normal((n, t))
    return MultidomainData(X, p, q)


def default_noise_sigma(Ln: np.ndarray, eig_cutoff: float = EIG_CUTOFF) -> float:
    """Mild default noise level: 0.1 times the root-mean-square amplitude
    of the smooth component on this graph."""
    lam = np.linalg.eigvalsh(np.asarray(Ln, dtype=float))
    pos = lam[lam > eig_cutoff]
    if pos.size == 0:
        return 0.0
    return 0.1 * float(np.sqrt(np.sum(1.0 / pos) / lam.size))


def apply_mask(
    data: MultidomainData,
    missing_fraction: float,
    sigma_noise: float = 0.0,
    seed: int = 0,
) -> MaskedData:
    """Hide a random subset of entries and add observation noise.

    Every entry is hidden independently with probability
    ``missing_fraction``; observed entries are perturbed by Gaussian noise
    of standard deviation ``sigma_noise``. Hidden entries are stored as
    zeros (they are ignored by all objectives regardless).
    """
    if not 0 <= missing_fraction < 1:
        raise ValueError("missing_fraction must lie in [0, 1)")
    if sigma_noise < 0:
        raise ValueError("sigma_noise must be nonnegative")
    rng = np.random.default_rng(seed)
    shape = data.data.shape
    mask = (rng.random(shape) >= missing_fraction).astype(float)
    y = data.data + sigma_noise * rng.standard_normal(shape)
    y = y * mask
    return MaskedData(y, mask, data.p, data.q)
