import csv

import numpy as np
import pytest

from homsvm.cli import main, read_header, rerun_from_header
from homsvm.dataset import paper_dataset, read_csv


def _rows(path):
    with open(path) as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))


def test_gen(tmp_path):
    out = tmp_path / "paper.csv"
    assert main(["gen", "-o", str(out)]) == 0
    assert read_csv(out) == paper_dataset()
    assert main(["gen", "--fillers", "--scale-axis", "1", "-o", str(out)]) == 0
    assert {tuple(x) for x in read_csv(out).points} == {(0.5, 30.0), (1.5, 10.0), (-0.5, -30.0), (-1.5, -10.0)}
    assert main(["gen", "--dataset", "random", "--seed", "5", "--n", "9", "--d", "3", "-o", str(out)]) == 0
    assert read_csv(out).n == 9


def test_run_trace(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["run", "--budget", "50000", "--bias", "-o", str(out)]) == 0
    head = read_header(out)
    assert head["config"]["s0"] == 10 and head["config"]["p"] == 0.5
    assert float(head["lambda_prime"]) == pytest.approx(0.5, abs=1e-6)
    assert float(head["L"]) == pytest.approx(2 * 40 * np.sqrt(2.5) / 16)
    rows = _rows(out)
    assert list(rows[0])[:9] == ["stage", "k", "lambda", "eta", "t", "loss", "l2_error", "angle_gap", "margin_gap"]
    assert int(rows[0]["k"]) == 100 and int(rows[1]["k"]) == 221
    for r in rows:
        assert float(r["l2_error"]) <= float(r["theorem_bound"])
        assert float(r["bias"]) == 0.0


def test_run_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["run", "--budget", "30000", "--update-rule", "best_iterate", "--step-mode", "normalized"]
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert rerun_from_header(a) == a.read_text()


def test_run_stages_and_strict(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["run", "--stages", "4", "--active-rule", "strict", "--dataset", "random",
                 "--seed", "3", "--n", "8", "-o", str(out)]) == 0
    assert len(_rows(out)) == 4
    assert rerun_from_header(out) == out.read_text()


def test_s0_sweep(tmp_path):
    template = str(tmp_path / "sweep_{s0}.csv")
    assert main(["run", "--s0", "3", "5", "10", "20", "--budget", "20000", "-o", template]) == 0
    for s0 in (3, 5, 10, 20):
        rows = _rows(tmp_path / f"sweep_{s0}.csv")
        assert read_header(tmp_path / f"sweep_{s0}.csv")["config"]["s0"] == s0
        assert all(float(r["l2_error"]) <= float(r["theorem_bound"]) for r in rows)


def test_run_without_oracle(tmp_path):
    out = tmp_path / "big.csv"
    assert main(["run", "--dataset", "random", "--n", "40", "--no-oracle", "--budget", "1000", "-o", str(out)]) == 0
    assert _rows(out)[0]["l2_error"] == ""
    # exact metrics on data beyond the oracle caps
    assert main(["run", "--dataset", "random", "--n", "40", "--budget", "1000", "-o", str(out)]) == 2


def test_baseline(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["baseline", "--iterations", "5000", "-o", str(out)]) == 0
    assert float(read_header(out)["eta"]) == pytest.approx(1 / np.sqrt(240))
    rows = _rows(out)
    ks = [int(r["k"]) for r in rows]
    assert ks[:3] == [100, 221, 365] and ks[-1] == 5000
    losses = [float(r["loss"]) for r in rows]
    assert all(a > b for a, b in zip(losses, losses[1:]))
    assert rerun_from_header(out) == out.read_text()


def test_compare(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["compare", "--budget", "20000", "--with-best", "-o", str(out)]) == 0
    rows = _rows(out)
    methods = {r["method"] for r in rows}
    assert methods == {"homotopic_averaged", "homotopic_best_iterate", "logistic"}
    by = {m: [int(r["k"]) for r in rows if r["method"] == m] for m in methods}
    assert by["logistic"] == by["homotopic_averaged"] == by["homotopic_best_iterate"]
    assert rerun_from_header(out) == out.read_text()


def _final(rows, method, column):
    return float([r for r in rows if r["method"] == method][-1][column])


def test_compare_scaled_data_hurts_logistic_more(tmp_path):
    plain, scaled = tmp_path / "p.csv", tmp_path / "s.csv"
    assert main(["compare", "--fillers", "--budget", "100000", "-o", str(plain)]) == 0
    assert main(["compare", "--fillers", "--scale-axis", "1", "--budget", "100000", "-o", str(scaled)]) == 0
    p, s = _rows(plain), _rows(scaled)
    for col in ("angle_gap", "margin_gap"):
        hom_change = _final(s, "homotopic_averaged", col) - _final(p, "homotopic_averaged", col)
        log_change = _final(s, "logistic", col) - _final(p, "logistic", col)
        assert log_change > hom_change
        assert _final(s, "homotopic_averaged", col) < _final(s, "logistic", col)


def test_verify_paper(tmp_path, capsys):
    assert main(["verify", "--lambda-grid", "0.1:2.0:0.1", "--budget", "20000"]) == 0
    assert "ALL PASS" in capsys.readouterr().out


def test_verify_four_points(capsys):
    assert main(["verify", "--fillers", "--lambda-grid", "0.1:4.0:0.1", "--budget", "20000"]) == 0
    out = capsys.readouterr().out
    lam = float(next(line for line in out.splitlines() if line.startswith("# lambda_prime=")).split("=")[1])
    assert lam == pytest.approx(2.0, abs=1e-3)


def test_verify_detects_corrupted_w_star(capsys):
    assert main(["verify", "--w-star", "0.5,0.6", "--lambda-grid", "0.1:1.0:0.1", "--budget", "5000"]) == 1
    out = capsys.readouterr().out
    assert "FAIL hard_margin" in out


@pytest.mark.parametrize("argv", [
    ["run", "--data", "/nonexistent/file.csv", "-o", "x.csv"],
    ["run", "--s0", "2", "-o", "x.csv"],
    ["verify", "--lambda-grid", "bogus"],
    ["gen", "--fillers", "1", "-o", "x.csv"],
])
def test_errors_exit_2(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
