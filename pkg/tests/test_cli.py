import json

import pytest

from adl import acceptance
from adl.cli import main
from adl.distributions import read_examples


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_then_opt(tmp_path, capsys):
    f = tmp_path / "d.txt"
    code, out, _ = _run(capsys, "gen", "--n", 8, "--planted", "1,4", "--eta", 0.0, "--out", f)
    assert code == 0
    assert json.loads(out)["n"] == 8
    assert read_examples(f).n == 8
    code, out, _ = _run(capsys, "opt", "--in", f)
    rep = json.loads(out)
    assert code == 0
    assert rep["opt"] == 0
    assert rep["argmin"]["support"] == [1, 4]


def test_repeated_runs_are_byte_identical(tmp_path, capsys):
    f = tmp_path / "d.txt"
    _run(capsys, "gen", "--n", 8, "--planted", "0,2,5", "--seed", 3, "--out", f)
    outs = [_run(capsys, "sq-learn", "--in", f, "--epsilon", 0.2)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert "wall_ms" not in outs[0]
    outs = [_run(capsys, "l1fit", "--in", f, "--degree", 2)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_usage_errors_exit_1(tmp_path, capsys):
    assert _run(capsys, "nosuchcommand")[0] == 1
    assert _run(capsys, "opt", "--in", tmp_path / "missing.txt")[0] == 1
    assert _run(capsys, "gen", "--n", 4)[0] == 1
    assert _run(capsys, "gen", "--n", 4, "--planted", "9")[0] == 1
    assert _run(capsys, "accept", "--suite", "bogus")[0] == 1


def test_dimension_mismatch(tmp_path, capsys):
    f = tmp_path / "d.txt"
    _run(capsys, "gen", "--n", 6, "--planted", "1", "--out", f)
    code, _, err = _run(capsys, "weak-sample", "--in", f, "--n", 7)
    assert code == 1
    assert "dimension" in err


def test_accept_exit_codes(monkeypatch, capsys):
    good = ("X1", "always true", "approx", 5, lambda: (True, {}))
    bad = ("X2", "always false", "approx", 5, lambda: (False, {"why": "scripted"}))
    monkeypatch.setattr(acceptance, "CRITERIA", [good])
    code, out, _ = _run(capsys, "accept", "--suite", "approx")
    assert code == 0 and "[PASS] X1" in out
    monkeypatch.setattr(acceptance, "CRITERIA", [good, bad])
    code, out, _ = _run(capsys, "accept", "--suite", "approx")
    assert code == 2
    assert "[FAIL] X2" in out and "1/2 passed" in out


def test_criterion_exception_is_a_failure():
    def boom():
        raise RuntimeError("x")
    res = acceptance.run_criterion(("X3", "raises", "approx", 5, boom))
    assert not res.passed
    assert "RuntimeError" in res.detail["exception"]


def test_frontier_writes_csv_and_png(tmp_path, capsys):
    code, out, _ = _run(capsys, "approx", "frontier", "--rs", "4,9", "--eps-list", "0.3,0.1",
                        "--out-dir", tmp_path)
    assert code == 0
    lines = (tmp_path / "frontier.csv").read_text().splitlines()
    assert lines[0] == "r,eps,degree,regime,max_dev,passed"
    assert len(lines) == 5
    assert (tmp_path / "frontier.png").stat().st_size > 0
    assert json.loads(out[out.index("{"):])["all_passed"] is True


def test_certify_reports(capsys):
    code, out, _ = _run(capsys, "approx", "certify", "--r", 9, "--epsilon", 0.1)
    rep = json.loads(out)
    assert code == 0
    assert rep["pass"] is True


def test_bench_csv_stable(tmp_path, capsys):
    a = _run(capsys, "bench", "--ns", "6", "--out-dir", tmp_path / "a", "--no-plot")[1]
    b = _run(capsys, "bench", "--ns", "6", "--out-dir", tmp_path / "b", "--no-plot")[1]
    assert a.split("{")[0] == b.split("{")[0]
    assert "seconds" not in a.splitlines()[0]


def test_jobs_env_validation(tmp_path, capsys, monkeypatch):
    f = tmp_path / "d.txt"
    _run(capsys, "gen", "--n", 6, "--planted", "1", "--out", f)
    monkeypatch.setenv("ADL_JOBS", "many")
    assert _run(capsys, "weak-sample", "--in", f, "--repeats", 2, "--sample-size", 100)[0] == 1
