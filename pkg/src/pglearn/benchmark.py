"""Multi-seed synthetic benchmark comparing the one-step and two-step
learners on community product graphs.

Per seed: draw two connected community factor graphs, sample smooth
signals on their Cartesian product, grid-search the regularizers of each
learner, and score the best point by edge-recovery F-measure on L_P, L_Q,
and the product Laplacian rebuilt from the learned factors.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graphs import DEFAULT_EDGE_THRESHOLD, cartesian_sum
from .learn import (
    LearnConfig,
    default_grid,
    grid_search,
    learn_product_graph,
    learn_two_step,
)
from .metrics import f_measure
from .synthetic import (
    CommunityGraphConfig,
    community_graph,
    default_noise_sigma,
    sample_smooth_signals,
)

ONE_STEP = "one-step"
TWO_STEP = "two-step"
METHODS = (ONE_STEP, TWO_STEP)


@dataclass(frozen=True)
class BenchmarkParams:
    """Experiment configuration; defaults reproduce the standard setup
    (product of 10- and 15-node community graphs, 50 snapshots)."""

    p: int = 10
    q: int = 15
    t: int = 50
    k_p: int = 2
    k_q: int = 3
    p_in: float = 0.7
    p_out: float = 0.05
    weight_low: float = 0.5
    weight_high: float = 1.5
    sigma: float | None = None
    alphas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()
    threshold: float = DEFAULT_EDGE_THRESHOLD

    def grid(self) -> list[LearnConfig]:
        alphas = self.alphas
        betas = self.betas
        if not alphas or not betas:
            return default_grid()
        return [LearnConfig(alpha=a, beta1=b, beta2=b) for a in alphas for b in betas]


@dataclass(frozen=True)
class GridScores:
    """Scores of every grid point for one method on one seed."""

    method: str
    rows: tuple[tuple[LearnConfig, float, float, float], ...]  # (cfg, f_p, f_q, f_n)
    best_index: int
    elapsed_s: float

    @property
    def best(self) -> tuple[LearnConfig, float, float, float]:
        return self.rows[self.best_index]


@dataclass(frozen=True)
class SeedOutcome:
    seed: int
    sigma: float
    scores: dict = field(default_factory=dict)  # method -> GridScores


@dataclass(frozen=True)
class BenchmarkResult:
    params: BenchmarkParams
    seeds: tuple[int, ...]
    outcomes: tuple[SeedOutcome, ...]

    def best_scores(self, method: str) -> np.ndarray:
        """(num_seeds, 3) array of best-point F-measures (L_P, L_Q, L_N)."""
        return np.asarray(
            [outcome.scores[method].best[1:] for outcome in self.outcomes]
        )

    def summary(self) -> dict:
        """Per method: mean and sd over seeds of the best-point scores."""
        out = {}
        for method in METHODS:
            best = self.best_scores(method)
            times = [o.scores[method].elapsed_s for o in self.outcomes]
            out[method] = {
                "f_lp_mean": float(best[:, 0].mean()),
                "f_lp_sd": float(best[:, 0].std(ddof=1)) if len(best) > 1 else 0.0,
                "f_lq_mean": float(best[:, 1].mean()),
                "f_lq_sd": float(best[:, 1].std(ddof=1)) if len(best) > 1 else 0.0,
                "f_ln_mean": float(best[:, 2].mean()),
                "f_ln_sd": float(best[:, 2].std(ddof=1)) if len(best) > 1 else 0.0,
                "grid_time_mean_s": float(np.mean(times)),
            }
        return out


def seed_instance(seed: int, params: BenchmarkParams):
    """Deterministic (Lp_true, Lq_true, data, sigma) for one seed."""
    sub = np.random.SeedSequence(seed).generate_state(3)
    lp = community_graph(
        CommunityGraphConfig(
            n=params.p, k=min(params.k_p, params.p), p_in=params.p_in,
            p_out=params.p_out,
            weight_low=params.weight_low, weight_high=params.weight_high,
            seed=int(sub[0]),
        )
    )
    lq = community_graph(
        CommunityGraphConfig(
            n=params.q, k=min(params.k_q, params.q), p_in=params.p_in,
            p_out=params.p_out,
            weight_low=params.weight_low, weight_high=params.weight_high,
            seed=int(sub[1]),
        )
    )
    ln = cartesian_sum(lp, lq)
    sigma = params.sigma if params.sigma is not None else default_noise_sigma(ln)
    data = sample_smooth_signals(ln, params.t, params.p, params.q, sigma, seed=int(sub[2]))
    return lp, lq, data, sigma


def _score_grid(method, data, truth, grid, threshold):
    lp_true, lq_true = truth
    ln_true = cartesian_sum(lp_true, lq_true)
    learner = learn_product_graph if method == ONE_STEP else learn_two_step
    t0 = time.perf_counter()
    result = grid_search(data, grid, truth, learner=learner, threshold=threshold, keep_models=True)
    elapsed = time.perf_counter() - t0
    rows = []
    best_index = 0
    best_score = -np.inf
    for idx, point in enumerate(result.points):
        f_n = f_measure(ln_true, cartesian_sum(point.Lp, point.Lq), threshold).f_measure
        rows.append((point.config, point.f_p, point.f_q, f_n))
        if point.score > best_score:
            best_score = point.score
            best_index = idx
    return GridScores(method=method, rows=tuple(rows), best_index=best_index, elapsed_s=elapsed)


def run_seed(seed: int, params: BenchmarkParams) -> SeedOutcome:
    """Generate one instance and grid-search both learners on it."""
    lp_true, lq_true, data, sigma = seed_instance(seed, params)
    truth = (lp_true, lq_true)
    grid = params.grid()
    scores = {
        method: _score_grid(method, data, truth, grid, params.threshold)
        for method in METHODS
    }
    return SeedOutcome(seed=seed, sigma=sigma, scores=scores)


def run_benchmark(
    seeds, params: BenchmarkParams | None = None, jobs: int = 1
) -> BenchmarkResult:
    """Run the benchmark over the given seeds.

    ``jobs > 1`` fans seeds out to a process pool; results are collected in
    seed order either way, so the output is independent of ``jobs``.
    """
    if params is None:
        params = BenchmarkParams()
    seeds = tuple(int(s) for s in seeds)
    if jobs <= 1:
        outcomes = [run_seed(s, params) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_seed, seeds, [params] * len(seeds)))
    return BenchmarkResult(params=params, seeds=seeds, outcomes=tuple(outcomes))
