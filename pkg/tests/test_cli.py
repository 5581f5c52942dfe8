import json
import subprocess
import sys

import pytest

from lingcs.cli import SUITES, emit_report, main, run_suite
from lingcs.report import Report
from lingcs.scenarios import BUILTIN, ScenarioError, builtin, load_scenario, parse_scenario

# one registered defect per suite that must fail with a printed witness
DEFECT_FOR = {
    "courant-axioms": "S_poly.nocurv",
    "dorfman-identities": "S_poly.nonskew",
    "gacs": "S_pert.j2",
    "integrability": "S_pert.nonint",
    "abracket": "S_pert.nonint",
    "quasi-real": "S_pert.nonint",
    "eigen": "S_pert.nonint",
    "kahler": "S_pert.kahler",
    "holomorphic": "S_pert.nonint",
    "algebroid-2rep": "S_nab.anchor",
    "glanon": "S_tm.antiholo",
    "deg-courant": "S_nab.anchor",
    "cpm": "S_tm.antiholo",
    "drinfeld": "S_tm.antiholo",
    "lie2": "S_pert.nonint",
}


def test_every_suite_has_a_defect():
    assert set(DEFECT_FOR) == set(SUITES)


@pytest.mark.parametrize("suite", sorted(DEFECT_FOR))
def test_defect_fails_with_witness(suite):
    rep = run_suite(builtin(DEFECT_FOR[suite]), suite)
    assert rep.failures
    assert all(c.witness for c in rep.failures)


# -- scenario parsing ------------------------------------------------------

def test_builtin_flat_contents():
    sc = builtin("S_flat")
    assert (sc.chart.dim, sc.dorfman.k) == (2, 2)
    assert all(c.is_zero() for g in sc.conn.gamma for r in g for c in r)
    assert sc.gcs.Phi.is_zero()


@pytest.mark.parametrize("text,fragment", [
    ("m = 2\nk = 1\nconn.gamma[1][1][1] = x1 +* 2\n", "position"),
    ("m = 2\nk = 1\nconn.gamma[3][1][1] = x1\n", "out of range"),
    ("k = 1\n", "m"),
    ("m = 2\nk = 1\nbogus.key = 3\n", "unknown"),
    ("m = 2\nk = 2\ncplx.JM = [[0, -1], [1, 0], [0, 0]]\ncplx.jE = [[0, -1], [1, 0]]\ngcs.kind = complex\n", ""),
    ("m = 2\nk = 1\ngcs.kind = symplectic\nsymp.tau = [[1, 0]]\nsymp.tau_inv = [[1], [0]]\n", ""),
])
def test_scenario_errors(text, fragment):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text, "t.scn")
    assert fragment in str(err.value)
    assert "t.scn" in str(err.value)


def test_unknown_builtin():
    with pytest.raises(ScenarioError):
        builtin("S_nope")


def test_scenario_file_round_trip(tmp_path):
    p = tmp_path / "flat.scn"
    p.write_text(BUILTIN["S_flat"])
    sc = load_scenario(str(p))
    assert sc.gcs.j == builtin("S_flat").gcs.j


# -- reports ---------------------------------------------------------------

def test_emit_empty_report():
    assert emit_report(Report(), "text") == b"0 passed, 0 failed, 0 skipped\n"
    head = json.loads(emit_report(Report(), "json", {"suite": "x"}))
    assert head == {"suite": "x", "summary": {"pass": 0, "fail": 0, "skipped": 0}}


def test_json_lines_round_trip():
    rep = Report()
    rep.add("a.one", "anchor", True)
    rep.add("a.two", "anchor", False, "w ≠ 0")
    rep.skip("a.three", "anchor", "why")
    lines = emit_report(rep, "json").decode().splitlines()
    recs = [json.loads(l) for l in lines]
    assert recs[0]["summary"] == {"pass": 1, "fail": 1, "skipped": 1}
    assert [(r["check_id"], r["status"], r["witness"]) for r in recs[1:]] == [
        ("a.one", "pass", None), ("a.two", "fail", "w ≠ 0"), ("a.three", "skipped", "why")]
    assert all(r["wall_time"] == 0.0 for r in recs[1:])


def test_text_report_shows_witness():
    rep = Report()
    rep.add("a.two", "anchor", False, "the witness")
    out = emit_report(rep).decode()
    assert "FAIL  a.two" in out and "witness: the witness" in out


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(Report(), "xml")


# -- main ------------------------------------------------------------------

def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "lingcs", *args], capture_output=True)


def test_exit_codes():
    assert run_cli("check", "--scenario", "builtin:S_flat", "--suite", "gacs").returncode == 0
    assert run_cli("check", "--scenario", "builtin:S_pert", "--suite", "gacs").returncode == 1
    bad = run_cli("check", "--scenario", "builtin:S_flat", "--suite", "nope")
    assert bad.returncode == 2 and b"unknown suite" in bad.stderr
    assert run_cli("check", "--scenario", "/no/such/file", "--suite", "gacs").returncode == 2
    assert run_cli("frobnicate").returncode == 2


def test_json_output_is_deterministic():
    args = ("check", "--scenario", "builtin:S_poly", "--suite", "dorfman-identities", "--format", "json", "--seed", "3")
    a, b = run_cli(*args), run_cli(*args)
    assert a.returncode == 0 and a.stdout == b.stdout
    head = json.loads(a.stdout.splitlines()[0])
    assert head["seed"] == 3 and head["summary"]["fail"] == 0


def test_list_commands(capsys):
    assert main(["list-suites"]) == 0
    out = capsys.readouterr().out.split()
    assert out == list(SUITES) + ["all"]
    assert main(["list-scenarios"]) == 0
    assert "S_c3" in capsys.readouterr().out


def test_missing_data_is_skipped():
    rep = run_suite(builtin("S_poly"), "gacs")
    assert rep.ok and [c.status for c in rep.records] == ["skipped"]


def test_unknown_suite_in_run_suite():
    with pytest.raises(ValueError):
        run_suite(builtin("S_flat"), "nope")
