"""Command-line interface.

Subcommands: generate, learn, learn-baseline, gridsearch, complete, eval,
reproduce-table1. All flags are long-form. Exit codes: 0 success, 1 usage
error, 2 data error, 3 solver non-convergence. Output files are written
atomically; randomized commands echo their effective seed to stdout and
record it in the output sidecar.
"""

import argparse
import sys
from pathlib import Path

from . import benchmark as bench
from .completion import CompletionConfig, alternate_joint
from .errors import DataError, NotConvergedError, PGLearnError, UnboundedLevelError
from .fileio import (
    atomic_write_text,
    load_masked,
    load_matrix,
    save_dataset,
    save_json,
    save_matrix,
)
from .graphs import DEFAULT_EDGE_THRESHOLD, cartesian_sum, validate_laplacian
from .learn import (
    DEFAULT_ALPHAS,
    DEFAULT_BETAS,
    LearnConfig,
    factor_qp_for,
    grid_search,
    learn_product_graph,
    learn_two_step,
    single_qp_for,
    solve_qp_result,
)
from .metrics import f_measure
from .projgrad import PGResult
from .qp import build_factorization_qp
from .signals import MultidomainData
from .synthetic import apply_mask
from .waterfill import WaterfillResult


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _write_table(path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    atomic_write_text(path, "\n".join(lines) + "\n")


def _write_solver_trace(path, result) -> None:
    if isinstance(result, WaterfillResult):
        rows = [
            [s + 1, repr(float(pr)), repr(float(du))]
            for s, (pr, du) in enumerate(zip(result.primal_trace, result.dual_trace))
        ]
        _write_table(path, ["sweep", "primal_residual", "dual_objective"], rows)
    elif isinstance(result, PGResult):
        rows = [[i, repr(float(v))] for i, v in enumerate(result.objective_trace)]
        _write_table(path, ["iter", "objective"], rows)


def _dump_qp(directory, qp) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_matrix(directory / "H.csv", qp.hess_diag)
    save_matrix(directory / "q.csv", qp.q)
    save_matrix(directory / "C.csv", qp.C)
    save_matrix(directory / "b.csv", qp.b)


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _learn_config(args) -> LearnConfig:
    return LearnConfig(
        alpha=args.alpha,
        beta1=args.beta1,
        beta2=args.beta2,
        solver=args.solver,
        normalize_data=not args.no_normalize,
    )


def _load_data(args) -> MultidomainData:
    X = load_matrix(args.data, header=args.header)
    try:
        return MultidomainData(X, args.p, args.q)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    params = bench.BenchmarkParams(
        p=args.p, q=args.q, t=args.t,
        k_p=args.p_communities, k_q=args.q_communities,
        p_in=args.p_in, p_out=args.p_out,
        weight_low=args.weight_low, weight_high=args.weight_high,
        sigma=args.sigma,
    )
    lp, lq, data, sigma = bench.seed_instance(args.seed, params)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sidecar = {
        "P": args.p, "Q": args.q, "T": args.t, "seed": args.seed, "sigma": sigma,
        "p_communities": args.p_communities, "q_communities": args.q_communities,
        "p_in": args.p_in, "p_out": args.p_out,
        "weight_low": args.weight_low, "weight_high": args.weight_high,
        "mask_fraction": args.mask_fraction, "mask_noise": args.mask_noise,
    }
    save_matrix(out / "truth_lp.csv", lp)
    save_matrix(out / "truth_lq.csv", lq)
    save_dataset(out / "data.csv", out / "data.json", data, extra=sidecar)
    if args.mask_fraction > 0:
        masked = apply_mask(data, args.mask_fraction, args.mask_noise, seed=args.seed)
        save_matrix(out / "mask.csv", masked.mask)
        save_matrix(out / "observed.csv", masked.y)
    print(f"seed: {args.seed}")
    print(f"sigma: {sigma}")
    print(f"wrote {out}/truth_lp.csv truth_lq.csv data.csv data.json"
          + (" mask.csv observed.csv" if args.mask_fraction > 0 else ""))
    return 0


def _report_learned(name, L) -> None:
    diag = validate_laplacian(L)
    print(
        f"{name}: n={diag.n} row-sum residual {diag.max_row_sum_residual:.2e} "
        f"trace residual {diag.trace_residual:.2e}"
    )


def cmd_learn(args) -> int:
    data = _load_data(args)
    cfg = _learn_config(args)
    qp = factor_qp_for(data, cfg)
    if args.dump_qp:
        _dump_qp(args.dump_qp, qp)
    result = solve_qp_result(qp, cfg)
    if args.trace:
        _write_solver_trace(args.trace, result)
    Lp, Lq = qp.split(result.z)
    save_matrix(args.out_lp, Lp)
    save_matrix(args.out_lq, Lq)
    _report_learned("L_P", Lp)
    _report_learned("L_Q", Lq)
    return 0


def cmd_learn_baseline(args) -> int:
    data = _load_data(args)
    cfg = _learn_config(args)
    qp1 = single_qp_for(data, cfg)
    if args.dump_qp:
        _dump_qp(args.dump_qp, qp1)
    res1 = solve_qp_result(qp1, cfg)
    (Ln,) = qp1.split(res1.z)
    qp2 = build_factorization_qp(Ln, args.p, args.q)
    res2 = solve_qp_result(qp2, cfg)
    if args.trace:
        trace = Path(args.trace)
        _write_solver_trace(trace, res1)
        _write_solver_trace(trace.with_suffix(".factor" + trace.suffix), res2)
    Lp, Lq = qp2.split(res2.z)
    save_matrix(args.out_lp, Lp)
    save_matrix(args.out_lq, Lq)
    save_matrix(args.out_ln, Ln)
    _report_learned("L_N", Ln)
    _report_learned("L_P", Lp)
    _report_learned("L_Q", Lq)
    return 0


def cmd_gridsearch(args) -> int:
    data = _load_data(args)
    truth = (load_matrix(args.truth_lp), load_matrix(args.truth_lq))
    alphas = _parse_floats(args.alphas) if args.alphas else DEFAULT_ALPHAS
    betas = _parse_floats(args.betas) if args.betas else DEFAULT_BETAS
    grid = [
        LearnConfig(alpha=a, beta1=b, beta2=b, solver=args.solver,
                    normalize_data=not args.no_normalize)
        for a in alphas for b in betas
    ]
    learner = learn_product_graph if args.learner == "onestep" else learn_two_step
    result = grid_search(data, grid, truth, learner=learner, threshold=args.threshold)
    rows = [
        [pt.config.alpha, pt.config.beta1, pt.config.beta2,
         repr(pt.f_p), repr(pt.f_q), repr(pt.score)]
        for pt in result.points
    ]
    _write_table(args.out_scores, ["alpha", "beta1", "beta2", "f_lp", "f_lq", "score"], rows)
    best = result.best
    print(f"best: alpha={best.alpha} beta1={best.beta1} beta2={best.beta2} "
          f"score={result.best_score:.4f}")
    print(f"wrote {args.out_scores}")
    return 0


def cmd_complete(args) -> int:
    masked = load_masked(args.data, args.mask, args.p, args.q, header=args.header)
    learn_cfg = LearnConfig(
        alpha=args.alpha, beta1=args.beta1, beta2=args.beta2,
        solver=args.solver, normalize_data=False,
    )
    comp_cfg = CompletionConfig(
        gamma_nuc=args.gamma_nuc,
        inner_iters=args.inner_iters,
        outer_iters=args.outer_iters,
        tol_outer=args.tol_outer,
    )
    result = alternate_joint(masked, learn_cfg, comp_cfg)
    save_matrix(args.out_x, result.x.data)
    save_matrix(args.out_lp, result.Lp)
    save_matrix(args.out_lq, result.Lq)
    if args.trace:
        rows = [[i, repr(float(v))] for i, v in enumerate(result.objective_trace)]
        _write_table(args.trace, ["half_step", "objective"], rows)
    _report_learned("L_P", result.Lp)
    _report_learned("L_Q", result.Lq)
    print(f"outer iterations: {result.outer_iters_used} converged: {result.converged}")
    print(f"objective: {float(result.objective_trace[-1])!r}")
    return 0


def cmd_eval(args) -> int:
    truth_lp = load_matrix(args.truth_lp)
    truth_lq = load_matrix(args.truth_lq)
    truth_ln = cartesian_sum(truth_lp, truth_lq)
    rows = []
    for est_arg in args.est:
        try:
            name, paths = est_arg.split("=", 1)
            lp_path, lq_path = paths.split(",")
        except ValueError as exc:
            raise UsageError(
                f"--est expects NAME=LP_PATH,LQ_PATH, got {est_arg!r}"
            ) from exc
        lp = load_matrix(lp_path)
        lq = load_matrix(lq_path)
        rows.append([
            name,
            f_measure(truth_lp, lp, args.threshold).f_measure,
            f_measure(truth_lq, lq, args.threshold).f_measure,
            f_measure(truth_ln, cartesian_sum(lp, lq), args.threshold).f_measure,
        ])
    header = ["method", "f_lp", "f_lq", "f_ln"]
    if args.format == "markdown":
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "|".join(["---"] * len(header)) + "|"]
        lines += ["| " + " | ".join(
            [row[0]] + [f"{v:.4f}" for v in row[1:]]) + " |" for row in rows]
        text = "\n".join(lines)
    else:
        lines = [",".join(header)]
        lines += [",".join([row[0]] + [f"{v:.6f}" for v in row[1:]]) for row in rows]
        text = "\n".join(lines)
    if args.out:
        atomic_write_text(args.out, text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_reproduce_table1(args) -> int:
    seeds = list(range(args.seed_start, args.seed_start + args.seeds))
    params = bench.BenchmarkParams(
        p=args.p, q=args.q, t=args.t, sigma=args.sigma,
        alphas=_parse_floats(args.alphas) if args.alphas else (),
        betas=_parse_floats(args.betas) if args.betas else (),
    )
    print(f"seeds: {seeds}")
    result = bench.run_benchmark(seeds, params, jobs=args.jobs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    grid = params.grid()
    rows = []
    for outcome in result.outcomes:
        one = outcome.scores[bench.ONE_STEP].rows
        two = outcome.scores[bench.TWO_STEP].rows
        for gi, cfg in enumerate(grid):
            rows.append([
                outcome.seed, cfg.alpha, cfg.beta1, cfg.beta2,
                f"{one[gi][1]:.6f}", f"{one[gi][2]:.6f}", f"{one[gi][3]:.6f}",
                f"{two[gi][1]:.6f}", f"{two[gi][2]:.6f}", f"{two[gi][3]:.6f}",
            ])
    _write_table(
        out / "scores.csv",
        ["seed", "alpha", "beta1", "beta2",
         "f_lp_onestep", "f_lq_onestep", "f_ln_onestep",
         "f_lp_twostep", "f_lq_twostep", "f_ln_twostep"],
        rows,
    )

    summary = result.summary()
    srows = []
    for method in bench.METHODS:
        s = summary[method]
        srows.append([
            method,
            f"{s['f_lp_mean']:.6f}", f"{s['f_lp_sd']:.6f}",
            f"{s['f_lq_mean']:.6f}", f"{s['f_lq_sd']:.6f}",
            f"{s['f_ln_mean']:.6f}", f"{s['f_ln_sd']:.6f}",
            f"{s['grid_time_mean_s']:.3f}",
        ])
    _write_table(
        out / "summary.csv",
        ["method", "f_lp_mean", "f_lp_sd", "f_lq_mean", "f_lq_sd",
         "f_ln_mean", "f_ln_sd", "grid_time_mean_s"],
        srows,
    )
    save_json(out / "run.json", {
        "seeds": seeds,
        "p": params.p, "q": params.q, "t": params.t,
        "sigma": params.sigma,
        "alphas": [c.alpha for c in grid],
        "betas": [c.beta1 for c in grid],
        "jobs": args.jobs,
    })

    print(f"{'method':<10} {'F(L_P)':>16} {'F(L_Q)':>16} {'F(L_N)':>16}")
    for method in bench.METHODS:
        s = summary[method]
        print(
            f"{method:<10} "
            f"{s['f_lp_mean']:.4f} +/- {s['f_lp_sd']:.4f} "
            f"{s['f_lq_mean']:.4f} +/- {s['f_lq_sd']:.4f} "
            f"{s['f_ln_mean']:.4f} +/- {s['f_ln_sd']:.4f}"
        )
    print(f"wrote {out}/scores.csv summary.csv run.json")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_data_args(p) -> None:
    p.add_argument("--data", required=True, help="N x T data matrix CSV")
    p.add_argument("--p", type=int, required=True, help="first factor size P")
    p.add_argument("--q", type=int, required=True, help="second factor size Q")
    p.add_argument("--header", action="store_true", help="skip the first CSV line")


def _add_learn_args(p) -> None:
    p.add_argument("--alpha", type=float, required=True, help="smoothness weight")
    p.add_argument("--beta1", type=float, default=1.0, help="Frobenius weight for L_P")
    p.add_argument("--beta2", type=float, default=1.0, help="Frobenius weight for L_Q")
    p.add_argument("--solver", choices=("waterfill", "pg"), default="waterfill")
    p.add_argument("--no-normalize", action="store_true",
                   help="skip rescaling data to unit mean snapshot energy")
    p.add_argument("--dump-qp", metavar="DIR", default=None,
                   help="write the assembled H, q, C, b as CSV files")
    p.add_argument("--trace", default=None, metavar="PATH",
                   help="write the solver convergence trace CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pglearn", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic product-graph dataset")
    g.add_argument("--out-dir", required=True)
    g.add_argument("--p", type=int, default=10)
    g.add_argument("--q", type=int, default=15)
    g.add_argument("--t", type=int, default=50)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sigma", type=float, default=None,
                   help="noise level (default: 0.1 x smooth-component RMS)")
    g.add_argument("--p-communities", type=int, default=2)
    g.add_argument("--q-communities", type=int, default=3)
    g.add_argument("--p-in", type=float, default=0.7)
    g.add_argument("--p-out", type=float, default=0.05)
    g.add_argument("--weight-low", type=float, default=0.5)
    g.add_argument("--weight-high", type=float, default=1.5)
    g.add_argument("--mask-fraction", type=float, default=0.0,
                   help="also write a random observation mask hiding this fraction")
    g.add_argument("--mask-noise", type=float, default=0.0)
    g.set_defaults(func=cmd_generate)

    l = sub.add_parser("learn", help="learn both factor Laplacians in one QP solve")
    _add_data_args(l)
    _add_learn_args(l)
    l.add_argument("--out-lp", required=True)
    l.add_argument("--out-lq", required=True)
    l.set_defaults(func=cmd_learn)

    lb = sub.add_parser("learn-baseline",
                        help="two-step baseline: full Laplacian, then factorization")
    _add_data_args(lb)
    _add_learn_args(lb)
    lb.add_argument("--out-lp", required=True)
    lb.add_argument("--out-lq", required=True)
    lb.add_argument("--out-ln", required=True)
    lb.set_defaults(func=cmd_learn_baseline)

    gs = sub.add_parser("gridsearch", help="search regularizers against known truth")
    _add_data_args(gs)
    gs.add_argument("--truth-lp", required=True)
    gs.add_argument("--truth-lq", required=True)
    gs.add_argument("--learner", choices=("onestep", "twostep"), default="onestep")
    gs.add_argument("--alphas", default=None, help="comma-separated alpha grid")
    gs.add_argument("--betas", default=None, help="comma-separated beta grid")
    gs.add_argument("--solver", choices=("waterfill", "pg"), default="waterfill")
    gs.add_argument("--no-normalize", action="store_true")
    gs.add_argument("--threshold", type=float, default=DEFAULT_EDGE_THRESHOLD)
    gs.add_argument("--out-scores", default="gridsearch_scores.csv")
    gs.set_defaults(func=cmd_gridsearch)

    c = sub.add_parser("complete",
                       help="joint completion and factor learning on masked data")
    c.add_argument("--data", required=True, help="observed N x T matrix CSV")
    c.add_argument("--mask", required=True, help="0/1 mask CSV aligned with the data")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--header", action="store_true", help="skip the first CSV line")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--beta1", type=float, default=1.0)
    c.add_argument("--beta2", type=float, default=1.0)
    c.add_argument("--gamma-nuc", type=float, default=1.0)
    c.add_argument("--inner-iters", type=int, default=100)
    c.add_argument("--outer-iters", type=int, default=50)
    c.add_argument("--tol-outer", type=float, default=1e-4)
    c.add_argument("--solver", choices=("waterfill", "pg"), default="waterfill")
    c.add_argument("--out-x", required=True)
    c.add_argument("--out-lp", required=True)
    c.add_argument("--out-lq", required=True)
    c.add_argument("--trace", default=None, help="write the outer objective trace CSV")
    c.set_defaults(func=cmd_complete)

    e = sub.add_parser("eval", help="score estimated factors against ground truth")
    e.add_argument("--truth-lp", required=True)
    e.add_argument("--truth-lq", required=True)
    e.add_argument("--est", action="append", required=True,
                   metavar="NAME=LP_PATH,LQ_PATH",
                   help="an estimate to score (repeatable)")
    e.add_argument("--threshold", type=float, default=DEFAULT_EDGE_THRESHOLD)
    e.add_argument("--format", choices=("csv", "markdown"), default="csv")
    e.add_argument("--out", default=None, help="write the table here instead of stdout")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("reproduce-table1",
                       help="multi-seed benchmark comparing both learners")
    r.add_argument("--out-dir", required=True)
    r.add_argument("--seeds", type=int, default=10, help="number of seeds")
    r.add_argument("--seed-start", type=int, default=0)
    r.add_argument("--p", type=int, default=10)
    r.add_argument("--q", type=int, default=15)
    r.add_argument("--t", type=int, default=50)
    r.add_argument("--sigma", type=float, default=None)
    r.add_argument("--alphas", default=None)
    r.add_argument("--betas", default=None)
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_reproduce_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (NotConvergedError, UnboundedLevelError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except PGLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
