import io
import json
import subprocess
import sys

import pytest

from shoi.benchmarks import testont_text as make_testont, worked_example_text
from shoi.cli import (
    EXIT_BUDGET,
    EXIT_CONSISTENT,
    EXIT_INCONSISTENT,
    EXIT_INPUT_ERROR,
    TRACE_VERSION,
    main,
    read_trace,
)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def worked(tmp_path):
    p = tmp_path / "worked.shoi"
    p.write_text(worked_example_text())
    return p


def test_check_consistent(worked):
    code, out, _ = run("check", worked, "--paper-m", 10)
    assert code == EXIT_CONSISTENT
    assert out.splitlines()[0] == "CONSISTENT"
    assert "AM invocations: 4" in out


def test_check_inconsistent(tmp_path):
    p = tmp_path / "t.shoi"
    p.write_text(make_testont(10, "incons"))
    code, out, _ = run("check", p)
    assert code == EXIT_INCONSISTENT
    assert out.startswith("INCONSISTENT")


def test_malformed_input(tmp_path):
    p = tmp_path / "bad.shoi"
    p.write_text("(implies A\n")
    code, out, err = run("check", p)
    assert code == EXIT_INPUT_ERROR
    assert err and not out


def test_missing_file(tmp_path):
    code, _, err = run("check", tmp_path / "nope.shoi")
    assert code == EXIT_INPUT_ERROR
    assert "nope.shoi" in err


def test_bad_usage():
    assert run("frobnicate")[0] == EXIT_INPUT_ERROR


def test_time_budget(tmp_path):
    p = tmp_path / "t.shoi"
    p.write_text(make_testont(40, "incons"))
    code, out, _ = run("check", p, "--timeout-s", 0.5)
    assert code == EXIT_BUDGET
    assert out.startswith("GAVE_UP")


def test_trace_file(worked, tmp_path):
    trace = tmp_path / "trace.jsonl"
    code, out, _ = run("trace", worked, "--paper-m", 10, "--trace-file", trace)
    assert code == EXIT_CONSISTENT
    header, events = read_trace(trace.read_text().splitlines())
    assert header["trace_version"] == TRACE_VERSION == 1
    assert header["command"] == "trace"
    assert events[-1]["event"] == "verdict"
    assert "Node x: " in out
    assert "cost=2" in out


def test_trace_to_stderr(worked):
    _, _, err = run("trace", worked)
    assert json.loads(err.splitlines()[0])["trace_version"] == 1


def test_gen_writes_file(tmp_path):
    p = tmp_path / "ca.shoi"
    code, out, _ = run("gen", "ca_provinces", "--extra", 1, "--out", p)
    assert code == 0
    assert "individuals=11" in out
    assert run("check", p)[0] == EXIT_INCONSISTENT


def test_gen_to_stdout():
    code, out, err = run("gen", "testont", "--n", 3)
    assert code == 0
    assert out.startswith("; TestOnt-Cons with n = 3")
    assert err.strip() == "axioms=6 concepts=5 individuals=4 roles=1"


def test_gen_bad_argument():
    code, _, err = run("gen", "testont", "--n", 0)
    assert code == EXIT_INPUT_ERROR and err


def test_verify_with_oracle(worked):
    code, out, _ = run("verify", worked, "--oracle", 4)
    assert code == EXIT_CONSISTENT
    lines = out.splitlines()
    assert lines[1:12] == [f"{p}: pass" for p in [f"P{i}" for i in range(1, 11)] + ["T"]]
    assert lines[-1] == "oracle: model with 3 element(s) found; agrees"


def test_verify_inconsistent(tmp_path):
    p = tmp_path / "t.shoi"
    p.write_text(make_testont(3, "incons"))
    code, out, _ = run("verify", p)
    assert code == EXIT_INCONSISTENT
    assert "property verification skipped: no complete clash-free graph" in out


def test_module_entry_point(worked):
    proc = subprocess.run([sys.executable, "-m", "shoi", "check", str(worked)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("CONSISTENT")
