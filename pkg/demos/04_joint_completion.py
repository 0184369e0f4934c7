"""Learn factor graphs from data with missing entries.

When a fifth of the observations are gone, the signals and the graphs are
estimated together: alternate between learning (L_P, L_Q) from the current
signal estimate and completing the signals by proximal gradient with
singular-value thresholding, sharing one objective. The objective trace is
nonincreasing by construction, imputation beats a column-mean fill, and
the recovered graph supports stay close to the full-data run.
"""

import numpy as np

from pglearn import (
    CompletionConfig,
    LearnConfig,
    alternate_joint,
    apply_mask,
    f_measure,
    learn_product_graph,
)
from pglearn.benchmark import BenchmarkParams, seed_instance
from pglearn.learn import normalized_data

lp_true, lq_true, raw, _ = seed_instance(1, BenchmarkParams())
data = normalized_data(raw)
masked = apply_mask(data, missing_fraction=0.2, sigma_noise=0.0, seed=11)
print(f"hidden entries: {int((masked.mask == 0).sum())} of {masked.mask.size}")

learn_cfg = LearnConfig(alpha=0.02, beta1=0.02 / 1.5, beta2=0.02 / 1.5,
                        normalize_data=False)
comp_cfg = CompletionConfig(gamma_nuc=0.002, inner_iters=150, outer_iters=40,
                            tol_outer=1e-6)
result = alternate_joint(masked, learn_cfg, comp_cfg)
trace = result.objective_trace
print(f"\nouter iterations: {result.outer_iters_used} (converged: {result.converged})")
print(f"objective: {trace[0]:.4f} -> {trace[-1]:.4f}, "
      f"monotone: {bool(np.all(np.diff(trace) <= 1e-9))}")

hidden = masked.mask == 0
rmse = np.sqrt(np.mean((result.x.data - data.data)[hidden] ** 2))
counts = np.maximum(masked.mask.sum(axis=0), 1.0)
col_mean = (masked.y * masked.mask).sum(axis=0) / counts
rmse_fill = np.sqrt(np.mean((np.broadcast_to(col_mean, masked.y.shape) - data.data)[hidden] ** 2))
print(f"\nmasked-entry RMSE: {rmse:.4f} (column-mean fill: {rmse_fill:.4f})")

full_lp, full_lq = learn_product_graph(data, LearnConfig(alpha=1.5))
print(f"\n{'graphs':<12} {'F(L_P)':>8} {'F(L_Q)':>8}")
print(f"{'full data':<12} {f_measure(lp_true, full_lp).f_measure:8.4f} "
      f"{f_measure(lq_true, full_lq).f_measure:8.4f}")
print(f"{'20% masked':<12} {f_measure(lp_true, result.Lp).f_measure:8.4f} "
      f"{f_measure(lq_true, result.Lq).f_measure:8.4f}")
