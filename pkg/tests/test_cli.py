import argparse
import json
import subprocess
import sys

import pytest

from modlat.cli import parse_conditions, run

F7 = "gl(n=2,ring=F7)"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_conditions():
    assert parse_conditions("1-4,9, 12") == [1, 2, 3, 4, 9, 12]
    for bad in ("0", "17", "a", "", "3-x"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_conditions(bad)


def test_model_build(capsys):
    code, out, _ = call(capsys, "model", "build", F7)
    info = json.loads(out)
    assert code == 0
    assert info["elements"] == 10 and info["G"] == 336 and info["kernel"] == 6


def test_check_schema_and_exit_codes(capsys):
    code, out, _ = call(capsys, "check", F7, "--conditions", "1-3,11")
    reports = json.loads(out)
    assert code == 0 and [r["condition"] for r in reports] == [1, 2, 3, 11]
    for r in reports:
        assert set(r) >= {"condition", "verdict", "witness", "domain_sizes", "elapsed_ms",
                          "sampled"}
    code, out, _ = call(capsys, "check", "gl(n=2,ring=F2)", "--format", "text")
    assert code == 1 and "fails" in out and all(l == l.rstrip() for l in out.splitlines())


def test_replay_file(capsys, tmp_path):
    code, out, _ = call(capsys, "check", "gl(n=2,ring=F3)", "--conditions", "11")
    assert code == 1
    report = tmp_path / "r.json"
    report.write_text(out)
    code, out, _ = call(capsys, "check", "gl(n=2,ring=F3)", "--replay", str(report))
    replayed = json.loads(out)
    assert code == 1 and replayed[0]["verdict"] == "fails" and replayed[0]["replayed"]


def test_theorem_commands(capsys):
    assert call(capsys, "thm1", F7)[0] == 0
    code, out, _ = call(capsys, "thm2", F7)
    assert code == 0 and sorted(v["details"]["index"] for v in json.loads(out)) == [1, 1, 1, 2]
    # hypotheses fail over F3, so theorem 1 is skipped and the exit code says so
    code, out, _ = call(capsys, "thm1", "gl(n=2,ring=F3)")
    assert code == 1 and {v["outcome"] for v in json.loads(out)} == {"skipped"}
    code, out, _ = call(capsys, "thm1", "gl(n=2,ring=F3)", "--unconditional")
    assert code == 1 and "fails" in {v["outcome"] for v in json.loads(out)}


def test_lemmas_nets_classify(capsys):
    assert call(capsys, "lemmas", "gl(n=2,ring=Z/4)")[0] == 0
    code, out, _ = call(capsys, "nets", F7)
    assert code == 0 and len(json.loads(out)) == 4
    code, out, _ = call(capsys, "classify", F7, "--format", "text")
    assert code == 0 and "interval sizes: [2, 1, 1, 1]" in out


def test_error_exit_codes(capsys):
    code, _, err = call(capsys, "check", "gl(n=2,ring=Q)")
    assert code == 2 and json.loads(err)["error"] == "ParseError"
    code, _, err = call(capsys, "model", "build", "gl(n=9,ring=F2)")
    assert code == 3 and json.loads(err)["exit_code"] == 3
    code, _, err = call(capsys, "model", "build", F7, "--budget-elements", "10", "--no-cache")
    assert code == 3 and json.loads(err)["error"] == "ClosureBudgetExceeded"
    assert call(capsys, "check")[0] == 2
    assert call(capsys, "check", F7, "--conditions", "99")[0] == 2
    assert call(capsys, "model", "build", "pentagon")[0] == 2


def test_cache_commands(capsys):
    call(capsys, "model", "build", "gl(n=1,ring=F7)")
    code, out, _ = call(capsys, "cache", "ls")
    assert code == 0 and json.loads(out)[0]["spec"] == "gl(n=1,ring=F7)"
    code, out, _ = call(capsys, "cache", "clear")
    assert json.loads(out) == {"removed": 1}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modlat", "--version"], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("modlat ")
