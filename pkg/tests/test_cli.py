import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from skewcalc import catalog
from skewcalc.cli import EXIT_FAIL, EXIT_OK, EXIT_UNDETERMINED, EXIT_USAGE, full_report, main

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("skewcalc").joinpath("report_schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ------------------------------------------------------------------ basic commands
def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == EXIT_OK
    assert [line.split()[0] for line in out.splitlines()] == list(catalog.IDS)


def test_nf(capsys):
    code, out, _ = run(capsys, "nf", "a5", "t2*t1")
    assert (code, out.strip()) == (EXIT_OK, "t1*t2 - t1^2")


def test_nf_json(capsys, schema):
    code, out, _ = run(capsys, "nf", "a5", "t2*t1", "--json", "--no-timestamp")
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["data"]["normal_form"] == "t1*t2 - t1^2"
    assert "timestamp" not in doc


def test_json_timestamp(capsys, schema):
    code, out, _ = run(capsys, "nf", "a5", "t1", "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["timestamp"].endswith("+00:00")


def test_hilbert(capsys):
    code, out, _ = run(capsys, "hilbert", "a6", "--degree", "5")
    assert (code, out.strip()) == (EXIT_OK, "1 2 4 6 9 12")


def test_verify_nakayama(capsys):
    code, out, _ = run(capsys, "verify", "nakayama", "a3")
    assert code == EXIT_OK
    assert out.startswith("a3: pass")


def test_complete_file(capsys):
    code, out, _ = run(capsys, "complete", str(DATA / "down_up.pres"), "--degree", "4")
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1] == "hilbert: 1 2 4 6 9"


def test_twist_file(capsys):
    code, out, _ = run(capsys, "twist", str(DATA / "jordan_twist.pres"))
    assert code == EXIT_OK
    assert "t2*t1 -> t1*t2 - t1^2" in out


def test_hopf_pattern(capsys):
    code, out, _ = run(capsys, "hopf", "pattern", "a3")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "equal: y11 = y22"


def test_hopf_pattern_file(capsys):
    code, out, _ = run(capsys, "hopf", "pattern", str(DATA / "skew_plane.pres"))
    assert code == EXIT_OK
    assert out.split() == ["g1", "0", "0", "0", "g2", "0", "0", "0", "g3"]


def test_hopf_power(capsys):
    code, out, _ = run(capsys, "hopf", "power", "a3", "--entry", "1,3")
    assert (code, out.strip()) == (EXIT_OK, "eta^n(y13) = (1/q^3)^n*(y13 - 3*n*y23)")


def test_center(capsys):
    code, out, _ = run(capsys, "center", "poly2", "--degree", "2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "degree 1: t2, t1"


def test_lnd_search(capsys):
    code, out, _ = run(capsys, "lnd", "search", "jordan", "--shifts", "0..0", "--degree", "2",
                       "--nilpotency", "4")
    assert code == EXIT_OK
    assert "t1 -> 0, t2 -> t1" in out and "commutes with mu: yes" in out


def test_lnd_none(capsys):
    code, out, _ = run(capsys, "lnd", "search", "a1", "--shifts", "-1..0", "--json", "--no-timestamp")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [s["status"] for s in doc["data"]["lnd"]["shifts"]] == ["none", "none"]


def test_ml_undetermined_is_exit_3(capsys):
    code, out, _ = run(capsys, "ml", "poly2", "--shifts", "-1..2", "--degree", "3", "--nilpotency", "4")
    assert code == EXIT_UNDETERMINED
    assert "degree 3: dim 0" in out


def test_aut5_commands(capsys):
    assert run(capsys, "aut5", "compose", "1;T1;0", "2;1;3")[1].strip() == "tau(2, T1 + 1, 3)"
    assert run(capsys, "aut5", "inverse", "1;Y2;2")[1].strip() == "tau(1, -Y2 + 2*T1^2, -2)"
    code, out, _ = run(capsys, "aut5", "apply", "1;0;2", "t3")
    assert (code, out.strip()) == (EXIT_OK, "t3 - t1")


def test_aut5_verify(capsys):
    code, out, _ = run(capsys, "aut5", "verify", "--count", "3")
    assert code == EXIT_OK
    assert out.startswith("a5: pass")


def test_aut5_zero_scale(capsys):
    code, _, err = run(capsys, "aut5", "inverse", "0;T1;0")
    assert code == EXIT_USAGE and "nonzero" in err


# ------------------------------------------------------------------ errors
@pytest.mark.parametrize("argv", [
    ["nf", "a5", "t2*"],
    ["nf", "nosuch", "t1"],
    ["nf", "a5", "q*t1"],
    ["frobnicate"],
    ["hopf", "power", "a3", "--entry", "x"],
    ["lnd", "search", "a1", "--shifts", "one..two"],
    ["hilbert", str(DATA / "missing.pres")],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_parse_error_position(capsys, tmp_path):
    bad = tmp_path / "bad.pres"
    bad.write_text("[generators]\nx : 1\n[relations]\nx*y\n", encoding="utf-8")
    code, _, err = run(capsys, "hilbert", str(bad))
    assert code == EXIT_USAGE
    assert "line 4" in err


def test_failing_nakayama_file(capsys, tmp_path):
    text = (DATA / "skew_plane.pres").read_text(encoding="utf-8")
    wrong = text.replace("t2 -> p^-1*t2", "t2 -> p*t2")
    assert wrong != text
    f = tmp_path / "wrong.pres"
    f.write_text(wrong, encoding="utf-8")
    code, out, _ = run(capsys, "verify", "nakayama", str(f))
    assert code == EXIT_FAIL


def test_assume_flag(capsys):
    code, out, _ = run(capsys, "hopf", "pattern", "poly2")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "hopf", "pattern", "a7", "--assume", "p not-root-of-unity", "--json",
                       "--no-timestamp")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert any("p not a root of unity" in a for c in doc["checks"] for a in c["assumptions"])


def test_bad_assumption(capsys):
    code, _, err = run(capsys, "hopf", "pattern", "a3", "--assume", "nonzero(q)")
    assert code == EXIT_USAGE


# ------------------------------------------------------------------ budget
def test_budget_env(capsys, monkeypatch):
    f = str(DATA / "down_up.pres")
    monkeypatch.setenv("SKEWCALC_BUDGET", "3")
    code, _, err = run(capsys, "nf", f, "u*d^2*u*d")
    assert code == EXIT_UNDETERMINED and "SKEWCALC_BUDGET" in err
    monkeypatch.setenv("SKEWCALC_BUDGET", "5")
    code, out, _ = run(capsys, "nf", f, "u*d^2*u*d")
    assert (code, out.strip()) == (EXIT_OK, "alpha*u*d*u*d^2 + beta*u^2*d^3")


def test_budget_flag_overrides_env(capsys, monkeypatch):
    monkeypatch.setenv("SKEWCALC_BUDGET", "3")
    code, _, _ = run(capsys, "nf", str(DATA / "down_up.pres"), "u*d^2*u*d", "--budget", "6")
    assert code == EXIT_OK


@pytest.mark.parametrize("value", ["abc", "0", "-4"])
def test_budget_env_invalid(capsys, monkeypatch, value):
    monkeypatch.setenv("SKEWCALC_BUDGET", value)
    code, _, err = run(capsys, "hilbert", str(DATA / "down_up.pres"), "--degree", "2")
    assert code == EXIT_USAGE and "SKEWCALC_BUDGET" in err


# ------------------------------------------------------------------ reports
@pytest.mark.parametrize("ident", catalog.IDS)
def test_report_validates(ident, schema):
    doc = full_report(ident).to_dict(None)
    jsonschema.validate(doc, schema)
    assert doc["algebra"] == ident
    assert doc["status"] in ("pass", "undetermined")


@pytest.mark.parametrize("ident", ["a1", "a5", "jordan"])
def test_report_deterministic(ident):
    first = json.dumps(full_report(ident).to_dict(None), sort_keys=True)
    second = json.dumps(full_report(ident).to_dict(None), sort_keys=True)
    assert first == second


def test_report_file(capsys, schema):
    code, out, _ = run(capsys, "report", str(DATA / "skew_plane.pres"), "--json", "--no-timestamp")
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert code in (EXIT_OK, EXIT_UNDETERMINED)


def test_report_exit_code(capsys):
    code, out, _ = run(capsys, "report", "a1")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "report", "g5")
    assert code == EXIT_UNDETERMINED
