import json

import numpy as np
import pytest

from pglearn.cli import main
from pglearn.fileio import load_matrix
from pglearn.graphs import validate_laplacian


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def dataset(tmp_path):
    out = tmp_path / "gen"
    code = run("generate", "--out-dir", out, "--p", "4", "--q", "3", "--t", "12",
               "--seed", "5")
    assert code == 0
    return out


class TestGenerate:
    def test_writes_expected_shapes(self, dataset):
        assert load_matrix(dataset / "truth_lp.csv").shape == (4, 4)
        assert load_matrix(dataset / "truth_lq.csv").shape == (3, 3)
        assert load_matrix(dataset / "data.csv").shape == (12, 12)
        meta = json.loads((dataset / "data.json").read_text())
        assert meta["P"] == 4 and meta["Q"] == 3 and meta["seed"] == 5

    def test_deterministic(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            assert run("generate", "--out-dir", out, "--p", "3", "--q", "3",
                       "--t", "6", "--seed", "9") == 0
        assert (a / "data.csv").read_bytes() == (b / "data.csv").read_bytes()

    def test_seed_echoed(self, tmp_path, capsys):
        run("generate", "--out-dir", tmp_path / "o", "--p", "3", "--q", "3",
            "--t", "4", "--seed", "17")
        assert "seed: 17" in capsys.readouterr().out

    def test_degenerate_single_node_factors(self, tmp_path):
        out = tmp_path / "deg"
        assert run("generate", "--out-dir", out, "--p", "1", "--q", "1",
                   "--t", "5", "--seed", "0", "--sigma", "0.3") == 0
        assert np.array_equal(load_matrix(out / "truth_lp.csv"), np.zeros((1, 1)))
        data = load_matrix(out / "data.csv")
        assert data.shape == (1, 5)
        assert np.any(data != 0)  # pure noise

    def test_default_shapes(self, tmp_path):
        out = tmp_path / "default"
        assert run("generate", "--out-dir", out) == 0
        assert load_matrix(out / "truth_lp.csv").shape == (10, 10)
        assert load_matrix(out / "truth_lq.csv").shape == (15, 15)
        assert load_matrix(out / "data.csv").shape == (150, 50)

    def test_mask_outputs(self, tmp_path):
        out = tmp_path / "m"
        assert run("generate", "--out-dir", out, "--p", "3", "--q", "3", "--t", "6",
                   "--seed", "1", "--mask-fraction", "0.3") == 0
        mask = load_matrix(out / "mask.csv")
        assert set(np.unique(mask)) <= {0.0, 1.0}
        assert load_matrix(out / "observed.csv").shape == (9, 6)


class TestLearn:
    def test_learn_and_outputs_valid(self, dataset, tmp_path):
        lp = tmp_path / "lp.csv"
        lq = tmp_path / "lq.csv"
        code = run("learn", "--data", dataset / "data.csv", "--p", "4", "--q", "3",
                   "--alpha", "1.5", "--beta1", "1.0", "--beta2", "1.0",
                   "--out-lp", lp, "--out-lq", lq)
        assert code == 0
        for path, n in ((lp, 4), (lq, 3)):
            diag = validate_laplacian(load_matrix(path), 1e-6)
            assert diag.ok and diag.trace_ok

    def test_dump_qp_and_trace(self, dataset, tmp_path):
        dump = tmp_path / "qp"
        trace = tmp_path / "trace.csv"
        code = run("learn", "--data", dataset / "data.csv", "--p", "4", "--q", "3",
                   "--alpha", "1.0", "--out-lp", tmp_path / "lp.csv",
                   "--out-lq", tmp_path / "lq.csv",
                   "--dump-qp", dump, "--trace", trace)
        assert code == 0
        H = load_matrix(dump / "H.csv")
        C = load_matrix(dump / "C.csv")
        assert H.shape == (16, 1)   # 10 + 6 slots
        assert C.shape == (9, 16)   # 4+1 plus 3+1 rows
        lines = trace.read_text().strip().splitlines()
        assert lines[0] == "sweep,primal_residual,dual_objective"
        assert len(lines) >= 2

    def test_baseline(self, dataset, tmp_path):
        code = run("learn-baseline", "--data", dataset / "data.csv",
                   "--p", "4", "--q", "3", "--alpha", "1.5",
                   "--out-lp", tmp_path / "lp.csv", "--out-lq", tmp_path / "lq.csv",
                   "--out-ln", tmp_path / "ln.csv")
        assert code == 0
        ln = load_matrix(tmp_path / "ln.csv")
        assert ln.shape == (12, 12)
        assert validate_laplacian(ln, 1e-6).ok


class TestGridsearchAndEval:
    def test_gridsearch(self, dataset, tmp_path, capsys):
        scores = tmp_path / "scores.csv"
        code = run("gridsearch", "--data", dataset / "data.csv", "--p", "4", "--q", "3",
                   "--truth-lp", dataset / "truth_lp.csv",
                   "--truth-lq", dataset / "truth_lq.csv",
                   "--alphas", "1.0,2.0", "--betas", "1.0",
                   "--out-scores", scores)
        assert code == 0
        lines = scores.read_text().strip().splitlines()
        assert len(lines) == 3
        assert "best:" in capsys.readouterr().out

    def test_eval_csv_and_markdown(self, dataset, tmp_path, capsys):
        lp = tmp_path / "lp.csv"
        lq = tmp_path / "lq.csv"
        run("learn", "--data", dataset / "data.csv", "--p", "4", "--q", "3",
            "--alpha", "1.5", "--out-lp", lp, "--out-lq", lq)
        capsys.readouterr()
        code = run("eval", "--truth-lp", dataset / "truth_lp.csv",
                   "--truth-lq", dataset / "truth_lq.csv",
                   "--est", f"onestep={lp},{lq}")
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("method,f_lp,f_lq,f_ln")
        code = run("eval", "--truth-lp", dataset / "truth_lp.csv",
                   "--truth-lq", dataset / "truth_lq.csv",
                   "--est", f"onestep={lp},{lq}", "--format", "markdown",
                   "--out", tmp_path / "table.md")
        assert code == 0
        assert (tmp_path / "table.md").read_text().startswith("| method |")

    def test_eval_bad_spec(self, dataset):
        assert run("eval", "--truth-lp", dataset / "truth_lp.csv",
                   "--truth-lq", dataset / "truth_lq.csv", "--est", "junk") == 1


class TestComplete:
    def test_complete_pipeline(self, tmp_path):
        out = tmp_path / "gen"
        run("generate", "--out-dir", out, "--p", "4", "--q", "4", "--t", "10",
            "--seed", "2", "--mask-fraction", "0.2")
        code = run("complete", "--data", out / "observed.csv", "--mask", out / "mask.csv",
                   "--p", "4", "--q", "4", "--alpha", "0.05",
                   "--beta1", "0.04", "--beta2", "0.04", "--gamma-nuc", "0.01",
                   "--inner-iters", "30", "--outer-iters", "5",
                   "--out-x", tmp_path / "x.csv", "--out-lp", tmp_path / "lp.csv",
                   "--out-lq", tmp_path / "lq.csv", "--trace", tmp_path / "tr.csv")
        assert code == 0
        assert load_matrix(tmp_path / "x.csv").shape == (16, 10)
        trace = np.array([float(r.split(",")[1])
                          for r in (tmp_path / "tr.csv").read_text().strip().splitlines()[1:]])
        assert np.all(np.diff(trace) <= 1e-9 * (1 + np.abs(trace[:-1])))


class TestReproduceTable1:
    def test_tiny_run(self, tmp_path, capsys):
        out = tmp_path / "bench"
        code = run("reproduce-table1", "--out-dir", out, "--seeds", "2",
                   "--p", "4", "--q", "3", "--t", "10", "--alphas", "1.5",
                   "--betas", "1.0")
        assert code == 0
        lines = (out / "scores.csv").read_text().strip().splitlines()
        assert len(lines) == 1 + 2 * 1  # header + seeds x grid
        assert (out / "summary.csv").exists()
        meta = json.loads((out / "run.json").read_text())
        assert meta["seeds"] == [0, 1]
        console = capsys.readouterr().out
        assert "seeds: [0, 1]" in console
        assert "one-step" in console


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert run("learn", "--data", "x.csv") == 1
        assert run("no-such-command") == 1

    def test_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1.0,2.0\n3.0\n")
        assert run("learn", "--data", bad, "--p", "2", "--q", "1", "--alpha", "1.0",
                   "--out-lp", tmp_path / "a.csv", "--out-lq", tmp_path / "b.csv") == 2

    def test_missing_file(self, tmp_path):
        assert run("learn", "--data", tmp_path / "nope.csv", "--p", "2", "--q", "2",
                   "--alpha", "1.0", "--out-lp", tmp_path / "a.csv",
                   "--out-lq", tmp_path / "b.csv") == 2

    def test_bad_parameter_value(self, dataset, tmp_path):
        assert run("learn", "--data", dataset / "data.csv", "--p", "4", "--q", "3",
                   "--alpha", "-1.0", "--out-lp", tmp_path / "a.csv",
                   "--out-lq", tmp_path / "b.csv") == 1

    def test_solver_failure(self, tmp_path, dataset):
        # P = 1 makes the trace constraint unsatisfiable (row sums force a
        # zero 1 x 1 Laplacian), so the solver cannot converge
        data = tmp_path / "d.csv"
        data.write_text("\n".join("1.0,2.0" for _ in range(4)) + "\n")
        code = run("learn", "--data", data, "--p", "1", "--q", "4",
                   "--alpha", "1.0", "--out-lp", tmp_path / "a.csv",
                   "--out-lq", tmp_path / "b.csv")
        assert code == 3
