import json
import subprocess
import sys

import pytest
from hypothesis import given

from lcstable.cli import main
from lcstable.zhegalkin import format_poly, parse_fn

from test_zhegalkin import functions


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_median(capsys):
    code, out, _ = run(capsys, "--format", "json", "analyze", "x1*x2 + x1*x3 + x2*x3")
    rep = json.loads(out)[0]
    assert code == 0
    assert rep["self_dual"] and rep["charrank"] == 1 and rep["parity"] == "odd"
    assert {"Sc", "SM"} <= set(rep["clones"])


def test_analyze_table_literal(capsys):
    code, out, _ = run(capsys, "analyze", "--format", "json", "tt:0b01101001")
    rep = json.loads(out)[0]
    assert rep["function"] == "x1 + x2 + x3" and "Lc" in rep["clones"]


def test_analyze_constant(capsys):
    code, out, _ = run(capsys, "analyze", "--format", "json", "1")
    rep = json.loads(out)[0]
    assert rep["constant"] and rep["degree"] == 0 and "I1" in rep["clones"]


def test_closure_check(capsys):
    code, out, _ = run(capsys, "closure", "x1*x2*x3", "--check")
    assert code == 0
    assert out.splitlines()[0] == "D3 ∩ C0E1"
    assert "agreement OK" in out


def test_closure_pair_and_empty(capsys):
    assert run(capsys, "closure", "x1+x2, x1*x2")[1].strip() == "D2 ∩ C0"
    assert run(capsys, "closure")[1].strip() == "Empty"


def test_closure_json(capsys):
    code, out, _ = run(capsys, "closure", "--format", "json", "--check", "--max-arity", "3", "tt:0b01111110")
    doc = json.loads(out)
    assert doc["agreement"] and doc["class"]["name"] == "D2 ∩ X1 ∩ C0E0"
    assert doc["oracle_sizes"] == {"1": 1, "2": 2, "3": 8}


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "x1 + ?")
    assert code == 2 and "position 4" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "stability", "Q7")[0] == 2
    assert run(capsys, "stability", "Omega", "--clone", "Nope")[0] == 2
    assert run(capsys, "closure", "x1", "--max-arity", "9")[0] == 2
    assert run(capsys, "table3", "--params", "z=1")[0] == 2
    assert run(capsys, "gfp", "gfp:p=4 poly:x1")[0] == 2


def test_arity_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("LCSTABLE_ARITY_CAP", "3")
    assert run(capsys, "closure", "x1", "--max-arity", "4")[0] == 2
    monkeypatch.setenv("LCSTABLE_ARITY_CAP", "6")
    assert run(capsys, "closure", "x1", "--check")[0] == 2
    monkeypatch.setenv("LCSTABLE_ARITY_CAP", "2")
    code, out, _ = run(capsys, "closure", "x1", "--check")
    assert code == 0 and "up to arity 2" in out


def test_classify(capsys):
    assert run(capsys, "classify", "0", "1")[1].strip() == "D0"


def test_stability(capsys):
    code, out, _ = run(capsys, "--format", "json", "stability", "D:2", "--clone", "L", "--clone", "Lambda_c",
                       "--side", "right")
    doc = json.loads(out)
    assert code == 0
    verdicts = {v["clone"]: v for v in doc["verdicts"]}
    assert verdicts["L"]["verdict"] == "Holds"
    assert verdicts["Lambda_c"]["verdict"] == "Fails" and "witness" in verdicts["Lambda_c"]


def test_table3_row(capsys):
    code, out, _ = run(capsys, "table3", "--row", "X_k", "--params", "k=1", "--cap", "3")
    assert code == 0 and "right S " in out


def test_table3_fault(capsys):
    code, out, _ = run(capsys, "table3", "--row", "X_k", "--params", "k=1", "--cap", "3", "--inject-fault")
    assert code == 1 and "FAIL" in out


def test_table3_json(capsys):
    code, out, _ = run(capsys, "table3", "--format", "json", "--row", "D0∩C_a", "--params", "a=0")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["cap"] == 4
    rec = [r for r in doc["instances"][0]["records"] if r["clone"] == "T1" and r["side"] == "left"][0]
    assert rec["verdict"] == "Fails" and rec["witness"]["result"]


def test_gfp(capsys):
    code, out, _ = run(capsys, "gfp", "gfp:p=3 vt:0,1,1@1", "--closure", "2")
    assert code == 0 and "class D2" in out and "equal: True" in out


def test_lattice_counts(capsys):
    code, out, _ = run(capsys, "--format", "json", "lattice", "--deg-bound", "1", "--char-bound", "1")
    doc = json.loads(out)
    assert len(doc["nodes"]) == 37
    assert sum(n["kind"] == "graded" for n in doc["nodes"]) == 33


def test_lattice_dot(capsys):
    code, out, _ = run(capsys, "lattice", "--deg-bound", "0", "--char-bound", "0", "--dot")
    assert out.startswith("digraph") and out.count("->") == 4 and out.count("label=") == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "lcstable", "classify", "x1*x2"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "D2 ∩ C0E1"


@given(functions())
def test_printer_round_trip(f):
    assert parse_fn(format_poly(f)) == f


@pytest.mark.parametrize("lit", ["x1x2 + x3", "tt:0x69@3", "1 + x2@4"])
def test_literal_forms_accepted(capsys, lit):
    assert run(capsys, "analyze", lit)[0] == 0
