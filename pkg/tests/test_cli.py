import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from annihilator import cli, groups, parallel, verify


def run(args, capsys):
    code = cli.run(args)
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------ exit codes


def test_verify_single_group(capsys):
    code, out, _ = run(["verify", "--group", "6", "--seed", "1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["groups"] == ["6"]
    assert rep["tool"]["name"] == "annihilator" and rep["seed"] == 1


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--group", "4y3"],
        ["constants", "--group", "2x", "--S", "0"],
        ["frobnicate"],
        [],
        ["rip", "--group", "8", "--omega", "a,b", "--s", "1"],
        ["rip", "--group", "8", "--omega", "0,1", "--s", "9"],
        ["constants", "--group", "4", "--S", "7"],
        ["stft-up", "--group", "4", "--Sigma-frac", "1.5"],
    ],
)
def test_usage_errors_exit_2(args, capsys):
    code, out, err = run(args, capsys)
    assert code == 2
    assert "usage" in err


def test_unwritable_output_exits_2(tmp_path, capsys):
    target = tmp_path / "missing-dir" / "report.json"
    code, _, err = run(["rip", "--group", "4", "--omega", "0,1", "--s", "1", "--output", str(target)], capsys)
    assert code == 2 and "cannot write" in err


def test_verify_fault_injection_exits_1(monkeypatch, capsys):
    real = groups.dft
    monkeypatch.setattr(groups, "dft", lambda spec, f, fast=False: 1.01 * real(spec, f, fast))
    code, out, _ = run(["verify", "--group", "4"], capsys)
    assert code == 1
    suites = {s["name"]: s for s in json.loads(out)["suites"]}
    assert not suites["unitarity"]["passed"]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "annihilator", "verify", "--group", "4y3"], capture_output=True, text=True
    )
    assert proc.returncode == 2


# -------------------------------------------------------------- reports


def test_constants_comb(capsys):
    code, out, _ = run(["constants", "--group", "4", "--pair", "fourier", "--S", "0,2", "--Sigma", "0,2"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["weak_pair"] is False
    assert rep["exact_constant_hi"] == "inf"
    for key in ("coherence", "op_norm", "hs_norm", "theorem_a_bound", "refined_bound", "lambda_min",
                "exact_constant_lo", "exact_constant_hi", "weak_pair"):
        assert key in rep
    w = np.array([complex(*z) for z in rep["witness"]])
    np.testing.assert_allclose(w, np.array([1, 0, 1, 0]) / np.sqrt(2), atol=1e-12)


def test_constants_spec_example(capsys):
    code, out, _ = run(["constants", "--group", "16", "--pair", "fourier", "--S", "0,2", "--Sigma", "1,5"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["weak_pair"] is True
    assert rep["coherence"] == pytest.approx(0.25)
    assert rep["theorem_a_bound"] == pytest.approx(3)
    assert rep["refined_bound"] <= rep["theorem_a_bound"]


def test_stft_up_csv_columns(capsys):
    code, out, _ = run(["stft-up", "--group", "8", "--window", "random", "--Sigma-frac", "0.5",
                        "--trials", "10", "--seed", "7"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["trial", "lhs", "rhs", "ratio", "bound"]
    assert len(rows) == 10
    assert all(float(r["ratio"]) <= 1 for r in rows)
    assert float(rows[0]["bound"]) == pytest.approx(32)


@pytest.mark.parametrize("cmd", [["recover", "--trials", "3"], ["problem41", "--group", "4", "--trials", "2"]])
def test_recovery_csv_columns(cmd, capsys):
    code, out, _ = run(cmd + ["--out", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["trial", "residual", "l1_objective", "rel_error", "converged"]


def test_problem41_json_is_exploratory(capsys):
    code, out, _ = run(["problem41", "--group", "4", "--trials", "2"], capsys)
    assert json.loads(out)["label"] == "exploratory"


@pytest.mark.parametrize(
    "cmd",
    [
        ["rip", "--group", "8", "--omega", "0,1,2,3", "--s", "2", "--mode", "exhaustive"],
        ["rv", "--d", "16", "--s", "2", "--eta", "0.5", "--trials", "20", "--seed", "11"],
        ["bt", "--d", "16", "--n", "8", "--seed", "3"],
    ],
)
def test_seed_echo(cmd, capsys):
    code, out, _ = run(cmd, capsys)
    rep = json.loads(out)
    assert code == 0 and "seed" in rep and "config" in rep


def test_record_timing_flag(capsys):
    _, out, _ = run(["rip", "--group", "4", "--omega", "0,1", "--s", "1"], capsys)
    assert "duration_seconds" not in json.loads(out)
    _, out, _ = run(["rip", "--group", "4", "--omega", "0,1", "--s", "1", "--record-timing"], capsys)
    assert json.loads(out)["duration_seconds"] >= 0


# -------------------------------------------------------- reproducibility


@pytest.mark.parametrize(
    "cmd",
    [
        ["verify", "--group", "2x3", "--seed", "5"],
        ["stft-up", "--group", "6", "--trials", "20", "--seed", "7"],
        ["rv", "--d", "16", "--s", "2", "--trials", "20", "--seed", "3"],
        ["recover", "--trials", "4", "--seed", "9"],
    ],
)
def test_byte_identical_reports(cmd, tmp_path, capsys):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert cli.run(cmd + ["--output", str(a)]) == 0
    assert cli.run(cmd + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_thread_count_does_not_change_output(monkeypatch, capsys):
    cmd = ["stft-up", "--group", "6", "--trials", "30", "--seed", "2"]
    _, single, _ = run(cmd, capsys)
    monkeypatch.setenv("ANNIHILATOR_THREADS", "4")
    assert parallel.thread_count() == 4
    _, multi, _ = run(cmd, capsys)
    assert single == multi


# ---------------------------------------------------------------- verify_all


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_verify_all_passes(seed):
    rep = verify.verify_all(seed, ["2", "5", "2x2", "3x3"], draws=3)
    bad = [s["name"] for s in rep["suites"] if not s["passed"]]
    assert rep["passed"], bad


def test_verify_all_empty_group_list():
    rep = verify.verify_all(1, [])
    assert rep["suites"] == [] and rep["groups"] == []
