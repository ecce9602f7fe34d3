"""Command-line surface: exit codes, formats, reproducible bytes."""

import json
import shutil
import subprocess

import pytest

from doubleword.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# --- verify -----------------------------------------------------------------------


def test_verify_single_fast_checker(capsys):
    code, out, err = run(capsys, "verify", "--check", "counterexample-registry")
    assert code == 0
    assert "PASS counterexample-registry" in out
    assert out.rstrip().endswith("PASS")
    assert err == ""


def test_verify_precision_override(capsys):
    code, out, _ = run(capsys, "verify", "--check", "fast2sum-uls-exactness", "--p", "5")
    assert code == 0
    assert "fast2sum-uls-exactness" in out


def test_verify_json_is_reproducible(capsys):
    argv = ("verify", "--check", "counterexample-registry", "--format", "json")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical: no wall-clock in the payload
    rec = json.loads(out1)
    assert rec["command"] == "verify" and rec["passed"] is True
    assert rec["reports"][0]["violations"] == 0
    assert "elapsed" not in json.dumps(rec)


def test_verify_csv_format(capsys):
    code, out, _ = run(capsys, "verify", "--check", "counterexample-registry", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "name,passed,lanes,violations,notes"
    assert lines[1].startswith("counterexample-registry,True")


def test_verify_rejects_unknown_checker(capsys):
    code, _, err = run(capsys, "verify", "--check", "no-such-sweep")
    assert code == 2
    assert "unknown checkers" in err


def test_verify_rejects_out_of_range_precision(capsys):
    code, _, err = run(capsys, "verify", "--check", "fast2sum-uls-exactness", "--p", "30")
    assert code == 2
    assert "needs 4 <= p <= 8" in err


def test_verify_rejects_precision_on_binary64_checker(capsys):
    code, _, err = run(capsys, "verify", "--check", "counterexample-registry", "--p", "6")
    assert code == 2
    assert "no precision parameter" in err


def test_verify_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "verify", "--check", "counterexample-registry", "--format", "json", "--out", str(path)
    )
    assert code == 0
    assert out == ""
    rec = json.loads(path.read_text())
    assert rec["passed"] is True


# --- errstats ----------------------------------------------------------------------


def test_errstats_small_run_json(capsys):
    argv = (
        "errstats", "--n", "4000", "--trials", "2", "--seed", "11",
        "--row", "yes/yes", "--format", "json",
    )
    code, out, _ = run(capsys, *argv)
    assert code == 0
    rec = json.loads(out)
    assert rec["command"] == "errstats"
    assert len(rec["rows"]) == 1
    row = rec["rows"][0]
    assert row["row"] == "yes/yes"
    assert row["omit_mul_norm"] is True and row["sloppy"] is True
    assert row["expected_avg_avg"] == 2.60e-33
    code2, out2, _ = run(capsys, *argv)
    assert out2 == out  # same seed, same bytes


def test_errstats_zero_lo_generator_is_exact(capsys):
    code, out, _ = run(
        capsys, "errstats", "--n", "500", "--trials", "1", "--generator", "zero-lo",
        "--format", "json",
    )
    assert code == 0
    rec = json.loads(out)
    assert all(row["avg_avg"] == 0.0 and row["max_max"] == 0.0 for row in rec["rows"])


def test_errstats_rejects_bad_arguments(capsys):
    code, _, err = run(capsys, "errstats", "--n", "0")
    assert code == 2 and "n must be" in err
    code, _, err = run(capsys, "errstats", "--trials", "0", "--n", "10")
    assert code == 2 and "trials must be" in err
    code, _, err = run(capsys, "errstats", "--row", "maybe", "--n", "10", "--trials", "1")
    assert code == 2 and "unknown row" in err


# --- counterexample ------------------------------------------------------------------


def test_counterexample_payload(capsys):
    code, out, _ = run(capsys, "counterexample", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    names = [e["name"] for e in rec["entries"]]
    assert names == ["worst-cancellation-a", "worst-cancellation-b", "directed-repair"]
    a = rec["entries"][0]
    # words are exact hex-float text, the error ratio is repr'd for bitness
    assert a["x_lo"] == "+0x1 p -53"
    assert a["sloppy_rel_error_over_u2"] == "2.9999999999999813"
    repair = rec["entries"][2]
    assert repair["accurate_add_rel"] == repr(2.0**-54)
    assert repair["accurate_add_directed_rel"] == "0.0"
    assert rec["passed"] is True


def test_counterexample_text(capsys):
    code, out, _ = run(capsys, "counterexample")
    assert code == 0
    assert "worst-cancellation-a" in out
    assert out.rstrip().endswith("PASS")


# --- bench --------------------------------------------------------------------------


def test_bench_count_only_json(capsys):
    code, out, _ = run(capsys, "bench", "--count-only", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert len(rec["rows"]) == 14
    assert rec["rows"][0] == {
        "kind": "maa",
        "omit_add_norm": False,
        "omit_mul_norm": False,
        "sloppy": False,
        "magsel": False,
        "cmp": 0,
        "add": 26,
        "mul": 4,
    }


def test_bench_count_only_text(capsys):
    code, out, _ = run(capsys, "bench", "--count-only")
    assert code == 0
    assert out.splitlines()[0].startswith("omit-add-norm")
    assert len(out.strip().splitlines()) == 15


def test_bench_smoke_run(capsys, monkeypatch):
    monkeypatch.setenv("DOUBLEWORD_BENCH_REPS", "1")
    code, out, _ = run(capsys, "bench", "--smoke", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert len(rec["rows"]) == 12
    assert all(r["m"] == r["n"] == r["k"] == 8 for r in rec["rows"])
    assert all(r["best_s"] > 0 for r in rec["rows"])


def test_bench_rejects_oversize(capsys):
    code, _, err = run(capsys, "bench", "--m", "4096", "--n", "4096", "--k", "4096")
    assert code == 2
    assert "cache-residency" in err


# --- parser/program plumbing ----------------------------------------------------------


def test_unknown_flag_exits_via_argparse(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["verify", "--frobnicate"])
    assert ex.value.code == 2


def test_missing_subcommand_is_an_error(capsys):
    with pytest.raises(SystemExit):
        main([])


@pytest.mark.skipif(shutil.which("doubleword") is None, reason="console script not on PATH")
def test_console_script_smoke():
    proc = subprocess.run(
        ["doubleword", "bench", "--count-only"], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0
    assert "omit-add-norm" in proc.stdout
