import io
import json
from importlib import resources

import jsonschema
import pytest

from kpoincare.cli import SUITES, EvalTypeError, ParseError, evaluate, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


SCHEMA = json.loads(resources.files("kpoincare").joinpath("report.schema.json").read_text())


@pytest.mark.parametrize("expr, want", [
    ("comm(v[0], v[1])", "(i/k)*v[1]"),
    ("pair(P[1], v[1]*v[0])", "1/k"),
    ("eps(v[2])", "0"),
    ("x[1]*x[0]", "(-i/k)*x1 + x0*x1"),
    ("ddi(1, x[0]*x[1])", "i/k + x0"),
    ("box(x[0]^2)", "1/4"),
    ("dd0(x[0]^2)", "2*x0"),
    ("comm(M[1,2], P[1])", "i*P[2]"),
    ("S(P[0])", "-P[0]"),
    ("hat(P[1], x[0]*x[1])", "i*x0"),
])
def test_eval_examples(expr, want):
    assert evaluate(expr) == want
    code, out, _ = run("eval", expr)
    assert code == 0 and out.strip() == want


def test_eval_errors():
    with pytest.raises(ParseError, match="position"):
        evaluate("comm(v[0], ")
    with pytest.raises(EvalTypeError):
        evaluate("pair(v[1], v[0])")
    code, _, err = run("eval", "v[0] +* v[1]")
    assert code == 2 and err.startswith("error:")


def test_usage_exit_codes():
    assert run("verify", "nonsense")[0] == 2
    assert run("verify")[0] == 2
    assert run("verify", "kg", "--order", "1")[0] == 2
    assert run("verify", "kg", "--bogus")[0] == 2
    assert run()[0] == 2


def test_list():
    code, out, _ = run("--list")
    assert code == 0 and out.split() == SUITES
    assert run("verify", "--list")[1].split() == SUITES


def test_json_report_validates():
    code, out, _ = run("verify", "rep-closure", "--spin", "1/2", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMA)
    assert rep["config"]["spin"] == "1/2" and rep["config"]["seed"] == 0
    assert rep["elapsed_ms"] is None
    names = {c["name"] for c in rep["checks"]}
    assert "spin 1/2: [M[1,0]~, M[2,0]~]" in names
    # su(2) checks plus one per pair of the 11 generators
    assert len(names) == 3 + 55


def test_text_and_json_share_checks():
    _, text, _ = run("verify", "momentum-shell")
    _, js, _ = run("verify", "momentum-shell", "--format", "json")
    checks = json.loads(js)["checks"]
    for c in checks:
        assert f"{c['status'].upper()} {c['suite']}: {c['name']}" in text
    assert text.strip().endswith(f"{len(checks)} checks, 0 failed")


def test_json_is_byte_identical():
    argv = ("verify", "duality", "--seed", "7", "--samples", "10", "--format", "json")
    assert run(*argv)[1] == run(*argv)[1]


def test_timing_is_opt_in():
    code, out, err = run("verify", "momentum-shell", "--timing")
    assert code == 0 and err.startswith("elapsed")
    _, js, _ = run("verify", "momentum-shell", "--timing", "--format", "json")
    assert isinstance(json.loads(js)["elapsed_ms"], float)


@pytest.mark.parametrize("suite", ["algebra-jacobi", "antirep", "rep-closure"])
def test_corrupt_demo_fails(suite):
    extra = ["--max-degree", "2"] if suite == "antirep" else ["--spin", "0"] if suite == "rep-closure" else []
    code, out, _ = run("verify", suite, "--corrupt", "demo", *extra)
    assert code == 1
    assert "residual:" in out
