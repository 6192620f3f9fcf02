import csv
import io
import json
import subprocess
import sys

import pytest

from zetacrit.cli import run


def _csv_rows(text):
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def _header(text):
    return {l[2:].split(":")[0]: l.split(":", 1)[1].strip() for l in text.splitlines() if l.startswith("# ")}


def test_tables_q_polys(capsys):
    assert run(["tables", "q-polys", "--order", "3"]) == 0
    out = capsys.readouterr().out
    rows = _csv_rows(out)
    q3 = {int(r["power"]): (int(r["numerator"]), int(r["denominator"])) for r in rows if r["index"] == "3"}
    assert q3 == {0: (1, 1), 1: (196, 45), 2: (14, 9), 3: (4, 45)}
    assert _header(out)["precision_bits"] == "256"


def test_tables_ml_polys(capsys):
    assert run(["tables", "ml-polys", "--order", "3"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    m3 = {(r["numerator"], r["denominator"]) for r in rows if r["index"] == "3"}
    assert m3 == {("4", "3"), ("2", "3")}


def test_tables_p_matrix_json(capsys, tmp_path):
    out = tmp_path / "p.json"
    assert run(["--format", "json", "--out", str(out), "tables", "p-matrix", "--order", "4"]) == 0
    doc = json.loads(out.read_text())
    cell = {(r["row"], r["col"]): (r["numerator"], r["denominator"]) for r in doc["rows"]}
    assert cell[(2, 2)] == (382, 945)
    assert cell[(3, 4)] == (65634094, 212837625)
    assert doc["meta"]["precision_bits"] == 256


def test_tables_matrices_need_s(capsys):
    assert run(["tables", "matrices", "--kind", "START", "--order", "3"]) == 2
    assert run(["tables", "matrices", "--kind", "START", "--order", "3", "--s", "1/2"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert {(r["row"], r["col"]): r["numerator"] + "/" + r["denominator"] for r in rows}[("3", "1")] == "-1/10"


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("ZETACRIT_PREC", "128")
    assert run(["tables", "r-polys", "--order", "1"]) == 0
    assert _header(capsys.readouterr().out)["precision_bits"] == "128"


def test_usage_errors(capsys):
    assert run(["tables", "bogus"]) == 2
    assert run(["--prec", "32", "tables", "q-polys"]) == 2
    assert run(["sequence", "not-a-number", "4"]) == 2


def test_verify_inner_product(capsys):
    assert run(["verify", "inner-product"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 153 and all(r["passed"] == "true" for r in rows)


def test_verify_hpolya(capsys):
    assert run(["verify", "hpolya"]) == 0


def test_verify_recursion_generic(capsys):
    assert run(["--prec", "128", "verify", "recursion", "--s", "-0.7"]) == 0


def test_sequence_trivial_zero(capsys):
    assert run(["sequence", "-2", "6", "--emit", "u"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert len(rows) == 6
    assert all(float(r["re"]) == 0 and float(r["im"]) == 0 for r in rows)


def test_sequence_c_first_row(capsys):
    assert run(["sequence", "0.3", "3", "--emit", "c"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert rows[0]["k"] == "1"
    assert rows[0]["re"].startswith("1.9129522126149931799")


def test_sequence_c_at_zero_is_structured_error(capsys):
    code = run(["sequence", "0.5+14.134725141734693790457251983562j", "4", "--emit", "c"])
    err = capsys.readouterr().err
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "eta-zero"


def test_sequence_residuals(capsys):
    assert run(["--prec", "128", "sequence", "0.3", "3", "--emit", "residuals"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert all(float(r["relative"]) < 1e-10 for r in rows)


def test_scan_deterministic_threads(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["scan", "--t-min", "12", "--t-max", "14", "--step", "0.5", "--N", "12"]
    assert run(["--out", str(a)] + args) == 0
    assert run(["--threads", "3", "--out", str(b)] + args) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = _csv_rows(a.read_text())
    assert [r["t"] for r in rows] == ["12.0", "12.5", "13.0", "13.5", "14.0"]
    summary = json.loads((tmp_path / "a.csv.minima.json").read_text())
    assert summary["N"] == 12 and isinstance(summary["minima"], list)


def test_scan_below_first_zero_has_no_minima(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run(["--out", str(out), "scan", "--t-min", "2", "--t-max", "10", "--step", "0.5", "--N", "32"]) == 0
    assert json.loads((tmp_path / "s.csv.minima.json").read_text())["minima"] == []


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "zetacrit", "tables", "r-polys", "--order", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "8,3" in r.stdout
