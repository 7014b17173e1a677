#!/usr/bin/python3
# vim: tabstop=8 expandtab shiftwidth=4 softtabstop=4
"""
test_cli.py
"""

import re

import pytest
from sympy import Rational

import libs.invariants
from PyKStab import main
from libs.piecewise import PiecewisePolynomial
from libs.report import read_records, Record

@pytest.fixture
def run(tmp_path, capsys):
    def runner(*argv):
        code = main(list(argv) + ["--config", str(tmp_path / "none")])
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return runner

@pytest.fixture
def p2_file(library, tmp_path):
    def write(**expect):
        with open(library.get_id("p2").filename) as f:
            text = f.read()
        for key, value in expect.items():
            text = re.sub(rf"^expect\.{key}=.*$", f"expect.{key}={value}", text, flags=re.M)
        path = tmp_path / "mine.fan"
        path.write_text(text)
        return str(path)
    return write

def records(out):
    return {(r.candidate, r.quantity): r.value for r in read_records(out)}

def test_volume(run):
    code, out, _err = run("volume", "f3")
    assert code == 0
    assert out == "25/3\n"

def test_delta(run):
    code, out, _err = run("delta", "blp2", "--radius", "1")
    assert code == 0
    assert out.splitlines()[-1] == "6/7 witness (1,1)"

def test_s(run):
    code, out, _err = run("s", "f3", "--v", "0,1", "--m-schedule", "4,8")
    assert code == 0
    assert "S_barycenter = 13/9" in out
    assert "S_curve = 13/9" in out

def test_s_primitivizes_with_a_note(run):
    code, out, _err = run("s", "p2", "--v", "2,2", "--m-schedule", "4")
    assert code == 0
    assert out.splitlines()[0] == "note: (2,2) primitivized to (1,1), scale 2"
    assert "(1,1)  A/S = 1" in out

def test_sm(run):
    code, out, _err = run("sm", "blp2", "--v", "1,1", "--m-schedule", "4,24", "--format", "csv")
    assert code == 0
    values = records(out)
    assert values[("(1,1)", "S_4")] == Rational(32, 27)
    assert values[("(1,1)", "S_24")] == Rational(172, 147)
    assert values[("(1,1)", "S")] == Rational(7, 6)

def test_delta_m(run):
    code, out, _err = run("delta-m", "blp2", "--radius", "1", "--m-schedule", "4,24")
    assert code == 0
    assert "delta_4_upper = 27/32" in out
    assert "delta_24_upper = 147/172" in out
    assert "(1,1)  delta_upper = 6/7" in out

def test_a(run):
    code, out, _err = run("a", "p2", "--radius", "1", "--m-schedule", "4")
    assert code == 0
    lines = out.splitlines()
    assert "a = oo" in lines
    assert "threshold = 0" in lines
    assert "delta_4_upper = 1" in lines
    assert "s-routes-agree: yes" in lines
    assert lines[-1] == "gate: gate-inconclusive"

def test_a_with_finite_value(run):
    code, out, _err = run("a", "f3", "--radius", "1", "--m-schedule", "4",
                          "--a-denominator", "64", "--format", "csv")
    assert code == 0
    values = records(out)
    assert values[("", "a")] == 5
    assert values[("", "threshold")] == Rational(3, 8)
    assert values[("", "a_bracket_lo")] < 5 <= values[("", "a_bracket_hi")]

def test_model(run):
    code, out, _err = run("model", "f3", "--radius", "1")
    assert code == 0
    assert out.splitlines()[0] == "Z rays: (1, 0) (-1, 3) (0, -1)"
    assert "FAIL" not in out
    assert out.splitlines()[-1] == "model_constant = 2"

@pytest.mark.parametrize("command", ["lemma26", "ample-s"])
def test_ample_s(run, command):
    code, out, _err = run(command, "p2")
    assert code == 0
    assert "-K-D  S(A) = 1/3" in out
    assert out.count("PASS") == 4
    code, out, _err = run(command, "f3")
    assert code == 0
    assert "A  S(A) = 1/3" in out

def test_ample_s_rejects_non_ample(run):
    code, _out, err = run("lemma26", "f3", "--divisor", "-K")
    assert code == 2
    assert "precondition" in err

@pytest.mark.parametrize("command", ["example38", "threefold"])
def test_threefold(run, command):
    code, out, _err = run(command, "--h2", "1", "--hk", "1")
    assert code == 0
    assert "vol(-K_X) = 4" in out
    assert "S_Y = 27/16" in out
    assert "bound 16/27 < 3/5: PASS" in out

def test_threefold_gate(run):
    code, out, _err = run("example38", "--h2", "1", "--hk", "1", "--a0", "1")
    assert code == 0
    assert "threshold = 4/5" in out
    assert out.splitlines()[-1] == "gate: assumption-fails"

def test_check(run):
    code, out, _err = run("check", "--only", "polytope-examples", "threefold")
    assert code == 0
    assert out.splitlines()[-1] == "2/2 checks passed"

def test_check_user_file_with_drift(run, p2_file):
    path = p2_file(volume=10)
    code, out, _err = run("check", path, "--only", "expected-values")
    assert code == 1
    assert "FAIL expected-values" in out
    assert "p2 volume: 9 != 10" in out

def test_drift_fails_an_instance_command(run, p2_file):
    path = p2_file(volume=10)
    code, out, err = run("volume", path)
    assert code == 1
    assert out == "9\n"
    assert "expected value drift: p2 volume: 9 != 10" in err

def test_user_file_without_drift(run, p2_file):
    code, out, err = run("volume", p2_file())
    assert code == 0
    assert out == "9\n"
    assert "drift" not in err

def test_csv_output(run):
    code, out, _err = run("volume", "p2", "--format", "csv")
    assert code == 0
    assert read_records(out) == [Record("p2", "", "vol(-K)", 9)]

def test_out_file(run, tmp_path):
    path = tmp_path / "report.csv"
    code, out, _err = run("delta-m", "p2", "--m-schedule", "4", "--format", "csv",
                          "--out", str(path))
    assert code == 0
    assert out == ""
    assert records(path.read_text())[("", "delta_4_upper")] == 1

def test_route_mismatch_exits_three(run, monkeypatch):
    def broken_curve(pair, v):
        return PiecewisePolynomial([0, 1], [[1]])
    monkeypatch.setattr(libs.invariants, "vol_curve", broken_curve)
    code, _out, err = run("s", "p2", "--ray", "0")
    assert code == 3
    assert "internal-inconsistency" in err

def test_unknown_instance(run):
    code, _out, err = run("volume", "nope")
    assert code == 2
    assert err.startswith("error: ")

def test_bad_ray(run):
    code, _out, err = run("s", "p2", "--ray", "7")
    assert code == 2
    assert "no ray 7" in err

def test_no_command(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().out
