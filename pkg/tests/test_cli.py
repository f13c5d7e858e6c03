import csv
import io
import json

import pytest

from learncap import checks, cli

GOLDEN_HEADERS = {
    "table1": ["m", "R_emp_mc", "stderr", "capacity_exact"],
    "table2": ["m", "R_emp_mc", "stderr", "bound_det", "bound_rand", "true_risk"],
    "fig1": ["s", "tv_exact", "approx_T1", "approx_T2", "approx_T3"],
    "fig3": ["m", "phi", "affinity_avg_machine", "affinity_majority"],
    "capacity": ["machine", "m", "grid_resolution", "capacity_estimate", "argmax"],
    "sqrt-law": ["m", "lazy_affinity", "sqrt_law_bound"],
    "check": ["suite", "instances", "failures", "worst_violation", "passed"],
}

FAST_ARGS = {
    "table1": ["--trials", "50"],
    "table2": ["--trials", "50"],
    "fig1": ["--grid", "11"],
    "fig3": ["--grid", "5"],
    "capacity": ["--m", "5"],
    "sqrt-law": [],
    "check": ["--trials", "20"],
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("command", list(GOLDEN_HEADERS))
def test_golden_headers(capsys, command):
    code, out = run(capsys, command, *FAST_ARGS[command])
    assert code == 0
    assert out.splitlines()[0].split(",") == GOLDEN_HEADERS[command]


@pytest.mark.parametrize("command", list(GOLDEN_HEADERS))
def test_json_mirrors_columns(capsys, command):
    _, out = run(capsys, command, *FAST_ARGS[command], "--format", "json")
    data = json.loads(out)
    assert list(data) == GOLDEN_HEADERS[command]
    assert len({len(v) for v in data.values()}) == 1


def test_byte_identical_files(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["table2", "--trials", "200", "--seed", "11", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_table1_capacity_column(capsys):
    _, out = run(capsys, "table1", "--trials", "1000", "--seed", "42")
    table = rows(out)
    assert [int(r["m"]) for r in table] == [10, 25, 50, 100, 200]
    assert round(float(table[0]["capacity_exact"]), 4) == 0.1230


def test_ten_significant_digits(capsys):
    _, out = run(capsys, "sqrt-law", "--m", "10", "--alphabet", "3")
    assert out.splitlines()[1] == "10,0.1820860641,0.1784124116"


def test_fig1_fair_coin_row(capsys):
    _, out = run(capsys, "fig1", "--grid", "101")
    table = rows(out)
    mid = table[50]
    assert float(mid["s"]) == 0.5
    assert float(mid["tv_exact"]) == 0.0 and float(mid["approx_T1"]) == 0.5
    assert len(table) == 101


def test_fig3_even_m_uses_enumeration(capsys):
    _, out = run(capsys, "fig3", "--m", "10", "--phi", "0.5")
    r = rows(out)[0]
    assert float(r["affinity_majority"]) == pytest.approx(0.123046875, abs=1e-9)


def test_capacity_argmax(capsys):
    _, out = run(capsys, "capacity", "--machine", "randomized", "--alphabet", "3", "--m", "3")
    r = rows(out)[0]
    assert r["machine"] == "randomized-label"
    assert float(r["capacity_estimate"]) == pytest.approx(2 / 9, abs=1e-9)
    assert r["argmax"] == "0.3333333333;0.3333333333;0.3333333333"


def test_check_exit_zero(capsys):
    code, out = run(capsys, "check", "--seed", "7")
    assert code == 0
    assert all(r["passed"] == "true" for r in rows(out))


def test_check_failure_exit_one(capsys, monkeypatch):
    monkeypatch.setattr(checks, "run_all", lambda seed, n: [checks.SuiteResult("x", 1, 1, 0.5)])
    code, _ = run(capsys, "check")
    assert code == 1


def test_budget_exit_three(capsys):
    code, _ = run(capsys, "capacity", "--machine", "lazy", "--alphabet", "4", "--m", "200")
    assert code == 3


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["table1", "--trials", "0"], ["fig3", "--phi", "1.5"], ["table1", "--seed", "-1"], ["sqrt-law", "--m", "x"]],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
