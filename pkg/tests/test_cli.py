import csv
import io
import json
import subprocess
import sys

import pytest

from yamabe_thresholds import aggregate
from yamabe_thresholds.cli import run
from yamabe_thresholds.rounding import round_down, round_nearest


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def csv_rows(text):
    return list(csv.reader(line for line in text.splitlines() if not line.startswith("#")))


def test_table3_csv():
    status, out, _ = call("table3", "--from", "7", "--to", "15", "--format", "csv")
    assert status == 0
    rows = csv_rows(out)
    assert rows[0] == ["m", "Q*(S^m)", "L_{m,m-3}"]
    assert [r[1] for r in rows[1:]] == ["113.5", "130.7", "147.9", "165.0", "182.2",
                                        "199.3", "216.4", "233.5", "250.6"]
    assert [r[2] for r in rows[1:]] == ["65.2", "78.7", "91.8", "104.9", "118.1",
                                        "131.5", "145.0", "158.6", "172.4"]
    assert any(line.startswith("#") and "147.88" in line for line in out.splitlines())


def test_raw_values_round_to_emitted():
    _, rounded, _ = call("table3", "--format", "csv")
    _, raw, _ = call("table3", "--format", "csv", "--rounding", "none")
    for r, w in zip(csv_rows(rounded)[1:], csv_rows(raw)[1:]):
        assert float(r[1]) == round_nearest(float(w[1]))
        assert float(r[2]) == round_down(float(w[2]))


def test_explicit_rounding_flag_applies_to_all_columns():
    _, out, _ = call("table3", "--from", "7", "--to", "7", "--format", "csv", "--rounding", "floor0.1")
    assert csv_rows(out)[1] == ["7", "113.5", "65.2"]
    _, out, _ = call("table3", "--from", "7", "--to", "7", "--format", "csv", "--rounding", "nearest0.1")
    assert csv_rows(out)[1] == ["7", "113.5", "65.3"]


def test_deterministic_output():
    assert call("table1", "--format", "json") == call("table1", "--format", "json")


def test_table1_json_provenance():
    status, out, _ = call("table1", "--format", "json")
    doc = json.loads(out)
    assert status == 0
    spin = [row["Lambda^spin_m>="]["value"] for row in doc["rows"]]
    assert spin == list(aggregate.PUBLISHED_LAMBDA_SPIN_M.values())
    assert all(row["Q*(S^m)"]["provenance"] for row in doc["rows"])
    assert doc["rows"][0]["Q*(S^m)"]["value"] == 79.0


def test_bound_codim3():
    status, out, _ = call("bound", "--m", "8", "--k", "5")
    assert status == 0
    line = next(l for l in out.splitlines() if "L-infimum" in l)
    assert line.split()[-1] == "78.7"
    assert "Qhat0" in out and "grid scan" in out


def test_bound_with_c_and_registry():
    _, out, _ = call("bound", "--m", "7", "--k", "2", "--c", "0.5", "--format", "json")
    doc = json.loads(out)
    names = [r["quantity"] for r in doc["rows"]]
    assert "Lambda^spin_{7,2} >=" in names
    assert "codimension condition" in names
    _, out, _ = call("bound", "--m", "8", "--k", "2", "--c", "0.5", "--q0", "60")
    assert "interpolated bound" in out
    _, out, _ = call("bound", "--m", "6", "--k", "4", "--c", "0.5")
    assert "Q*(M_c)" in out


def test_scan_csv():
    status, out, _ = call("scan", "--m", "8", "--k", "5", "--samples", "11", "--format", "csv")
    rows = csv_rows(out)
    assert status == 0 and len(rows) == 12
    assert float(rows[1][0]) == 0.0 and float(rows[-1][0]) == 1.0
    status, _, err = call("scan", "--m", "9", "--k", "2")
    assert status == 1 and "--q0" in err
    status, out, _ = call("scan", "--m", "9", "--k", "2", "--q0", "50", "--samples", "3")
    assert status == 0


def test_cap_full_sphere():
    status, out, _ = call("cap", "--m", "5", "--r", "3.14159265", "--format", "json")
    doc = json.loads(out)
    values = {r["quantity"]: r["value"]["value"] for r in doc["rows"]}
    assert status == 0
    assert values["renormalized"] == values["Q*(S^m)"] == 79.0
    assert any("80.0" in n for n in doc["notes"])
    assert call("cap", "--m", "5", "--r", "4")[0] == 1


def test_relations_check_and_injection():
    status, out, _ = call("relations", "check")
    assert status == 0 and "consistent" in out
    status, out, _ = call("relations", "check", "--inject", "Lambda^spin(7,4) < 65.2")
    assert status == 3 and "contradiction" in out
    status, _, _ = call("relations", "check", "--inject", "not a fact")
    assert status == 1


def test_relations_export_round_trip():
    from yamabe_thresholds.relations import graph_from_json
    status, out, _ = call("relations", "export", "--format", "json")
    assert status == 0 and graph_from_json(out).to_json() == out


def test_registry_dump_round_trip():
    status, out, _ = call("registry", "dump")
    assert status == 0
    assert aggregate.registry_to_lines(aggregate.registry_from_lines(out)) == out
    _, out, _ = call("registry", "dump", "--format", "json")
    assert aggregate.registry_from_json(out) == aggregate.builtin_registry()
    _, out, _ = call("registry", "dump", "--format", "csv")
    assert csv_rows(out)[0][0] == "invariant"


def test_usage_errors(capsys):
    assert run(["table3", "--frm", "3"]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and "usage" in captured.err
    assert run(["nope"]) == 1
    assert call("table3", "--from", "3")[0] == 1
    assert call("bound", "--m", "5", "--k", "7")[0] == 1


def test_internal_failure_exit_code(monkeypatch):
    from yamabe_thresholds import codim3

    def broken(m):
        raise codim3.CrossValidationError("mismatch")

    monkeypatch.setattr(codim3, "infimum_L", broken)
    status, out, err = call("table3")
    assert status == 2 and out == "" and "mismatch" in err


def test_output_file(tmp_path):
    target = tmp_path / "t3.csv"
    status, out, _ = call("table3", "--format", "csv", "--output", str(target))
    assert status == 0 and out == ""
    assert "113.5" in target.read_text(encoding="utf-8")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "yamabe_thresholds", "table3", "--from", "8", "--to", "8"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "78.7" in res.stdout
    res = subprocess.run([sys.executable, "-m", "yamabe_thresholds", "--bogus"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 1 and res.stdout == ""
