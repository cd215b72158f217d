import csv
import io
import json

import pytest
from click.testing import CliRunner

from psilog.certify import default_constants_path
from psilog.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env)

    return invoke


def test_constants(run):
    res = run("constants")
    assert res.exit_code == 0
    assert "0.512967071402" in res.output
    assert "0.79003298276" in res.output


def test_eval_residual(run):
    res = run("eval", "--x", "0", "--a", "0.5")
    assert res.exit_code == 0
    assert "4.0043e-4" in res.output


def test_eval_derivative_json(run):
    res = run("eval", "--x", "0", "--a", "0.5", "--order", "1", "--format", "json")
    records = json.loads(res.output)
    assert [r["k"] for r in records] == [0, 1]
    assert records[1]["approximant"].startswith("1.63846153846")  # 213/130


@pytest.mark.parametrize("args", [
    ("bounds", "psi", "--x", "1"),
    ("bounds", "harmonic", "--n", "10", "--a", "0.5"),
    ("bounds", "psi1", "--x", "0"),
    ("bounds", "psi2", "--x", "3/7"),
])
def test_bounds_pass(run, args):
    res = run(*args, "--format", "json")
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)[0]["verdict"] == "PASS"


def test_bounds_without_theorem(run):
    res = run("bounds", "harmonic", "--n", "10", "--a", "0.6")
    assert res.exit_code == 2
    assert "no theorem" in res.output


def test_gamma_table_default(run):
    res = run("gamma-table")
    assert res.exit_code == 0
    assert "l(a1)" in res.output and "4.1462e-25" in res.output


def test_gamma_table_csv(run):
    res = run("gamma-table", "--seq", "sigma", "--seq", "tau", "--n", "10", "--n", "100",
              "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert len(rows) == 4
    assert rows[0]["id"] == "sigma" and rows[0]["display"] == "4.5429e-7"


def test_order(run):
    res = run("order", "--seq", "l:a1", "--n", "128", "--format", "json")
    rec = json.loads(res.output)[0]
    assert rec["nominal"] == 8 and abs(float(rec["p_hat"]) - 8) < 0.1


def test_certify_all(run):
    res = run("certify")
    assert res.exit_code == 0, res.output


def test_certify_filter(run):
    res = run("certify", "--filter", "w8_positive", "--format", "json")
    records = json.loads(res.output)
    assert [r["name"] for r in records] == ["w8_positive_on_0_inf"]
    assert records[0]["verdict"] == "PASS"


def test_certify_corrupted_constants(run, tmp_path):
    text = default_constants_path().read_text()
    bad = tmp_path / "bad.txt"
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("w8 "):
            name, var, coeffs = line.split(";")
            c = coeffs.split()
            c[-1] = "-" + c[-1].lstrip("-")
            lines[i] = ";".join([name, var, " " + " ".join(c)])
    bad.write_text("\n".join(lines) + "\n")
    res = run("certify", "--filter", "w8", "--constants", str(bad))
    assert res.exit_code == 1


def test_domain_error(run):
    res = run("eval", "--x", "-1", "--a", "0.5")
    assert res.exit_code == 2
    assert "domain" in res.output


def test_precision_guard(run):
    res = run("order", "--seq", "l:a1", "--n", "100000", "--prec", "20")
    assert res.exit_code == 2
    assert "increase precision" in res.output


def test_json_deterministic(run):
    a = run("certify", "--filter", "lower_bound", "--format", "json").output
    b = run("certify", "--filter", "lower_bound", "--format", "json").output
    assert a == b
    assert json.loads(a)


def test_prec_env(run):
    env = {"PSILOG_PREC": "30"}
    short = json.loads(run("eval", "--x", "1", "--format", "json", env=env).output)[0]
    wide = json.loads(run("eval", "--x", "1", "--format", "json", "--prec", "60",
                          env=env).output)[0]
    assert len(wide["oracle"]) > len(short["oracle"]) + 20
