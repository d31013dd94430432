"""End-to-end command-line behavior, run in-process via main(argv)."""
from __future__ import annotations

import json

import pytest

from sidonlab.cli import main
from sidonlab.constructions import bose_integer
from sidonlab.core import is_sidon


def _write(path, obj) -> str:
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


# NOTE: this test must run before anything else in the session touches the
# no-ceiling solver cache; with a warm cache solve_max would answer n=25
# from memory and never hit the budget.  Earlier test files only use the
# default (ceiling) cache, and this file keeps --no-ceiling unique to here.
def test_solve_budget_exhausted_exits_3(capsys):
    rc = main(["solve", "--n", "25", "--no-ceiling", "--budget-nodes", "1"])
    out = capsys.readouterr().out
    assert rc == 3
    assert "incomplete" in out
    assert "budget" in out
    assert "S_25 >=" in out


def test_construct_greedy_prints_elements(capsys):
    rc = main(["construct", "greedy", "5", "--no-timestamp"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "elements: 1 2 4 8 13" in out
    assert "size=5" in out and "is_sidon=true" in out
    payload = json.loads(out.strip().splitlines()[-1])
    assert payload == {"elements": [1, 2, 4, 8, 13], "n": 13}


def test_construct_bose_rejects_composite(capsys):
    rc = main(["construct", "bose", "4"])
    err = capsys.readouterr().err
    assert rc == 2
    assert "not prime" in err


def test_construct_singer_reports_modulus(capsys):
    rc = main(["construct", "singer", "3", "--no-timestamp"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "size=4" in out and "modulus=13" in out
    payload = json.loads(out.strip().splitlines()[-1])
    assert payload["modulus"] == 13
    assert len(payload["elements"]) == 4


def test_construct_writes_json_file(tmp_path, capsys):
    out_file = tmp_path / "bose13.json"
    rc = main(["construct", "bose", "13", "--out", str(out_file),
               "--no-timestamp"])
    capsys.readouterr()
    assert rc == 0
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert data["n"] == 168 and len(data["elements"]) == 13
    assert "generated_at" not in data


def test_solve_small(capsys):
    rc = main(["solve", "--n", "7"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "S_7 = 4" in out
    witness_line = next(l for l in out.splitlines() if l.startswith("witness:"))
    elements = [int(x) for x in witness_line.split(":", 1)[1].split()]
    assert len(elements) == 4
    assert is_sidon(elements, 7)
    assert "nodes=" in out


def test_solve_requires_n(capsys):
    rc = main(["solve"])
    err = capsys.readouterr().err
    assert rc == 2
    assert "requires --n" in err


def test_solve_json_out(tmp_path, capsys):
    out_file = tmp_path / "solve.json"
    rc = main(["solve", "--n", "12", "--out", str(out_file),
               "--no-timestamp"])
    capsys.readouterr()
    assert rc == 0
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert data["schema_version"] == 1
    assert data["kind"] == "solve"
    assert data["n"] == 12 and data["s_n"] == 5
    assert len(data["witness"]) == 5
    assert "millis" not in data and "wall_time" not in data
    assert "generated_at" not in data


def test_solve_table_csv(tmp_path, capsys):
    csv_file = tmp_path / "table.csv"
    rc = main(["solve", "--n", "20", "--table", str(csv_file)])
    capsys.readouterr()
    assert rc == 0
    lines = csv_file.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "n,s_n,witness,nodes,millis"
    assert len(lines) == 21
    assert lines[1].startswith("1,1,1,")
    assert lines[20].startswith("20,6,")


def test_solve_threads_flag(capsys):
    rc = main(["solve", "--n", "30", "--threads", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "S_30 = 7" in out


def test_sums_singleton(tmp_path, capsys):
    set_file = _write(tmp_path / "one.json", {"n": 1, "elements": [1]})
    rc = main(["sums", set_file])
    out = capsys.readouterr().out
    assert rc == 0
    assert "power-sum ell=1: actual=1 main=1/2" in out


def test_sums_weighted_and_lindstrom(tmp_path, capsys):
    set_file = _write(tmp_path / "s.json",
                      {"n": 7, "elements": [1, 2, 5, 7]})
    out_file = tmp_path / "sums.json"
    rc = main(["sums", set_file, "--ell", "2", "--weighted", "--lindstrom",
               "--out", str(out_file), "--no-timestamp"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "power-sum ell=2:" in out
    assert "weighted-sum ell=2:" in out
    assert "reversed-weight sum:" in out
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert data["set"] == {"n": 7, "elements": [1, 2, 5, 7]}
    kinds = [r["kind"] for r in data["reports"]]
    assert kinds == ["power-sum", "weighted-sum", "lindstrom-sum"]
    assert data["reports"][0]["actual_sum"] == 1 + 4 + 25 + 49


def test_sums_rejects_modular_file(tmp_path, capsys):
    set_file = _write(tmp_path / "m.json",
                      {"modulus": 13, "elements": [0, 1, 3, 9]})
    rc = main(["sums", set_file])
    err = capsys.readouterr().err
    assert rc == 2
    assert "modular" in err


def test_sums_missing_file(tmp_path, capsys):
    rc = main(["sums", str(tmp_path / "nope.json")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_sums_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    rc = main(["sums", str(bad)])
    assert rc == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_sums_non_sidon_file(tmp_path, capsys):
    set_file = _write(tmp_path / "ns.json", {"n": 10, "elements": [1, 2, 3]})
    rc = main(["sums", set_file])
    assert rc == 2
    assert "Sidon" in capsys.readouterr().err


def test_config_fills_missing_flags(tmp_path, capsys):
    cfg = _write(tmp_path / "cfg.json", {"n": 7})
    rc = main(["solve", "--config", cfg])
    out = capsys.readouterr().out
    assert rc == 0
    assert "S_7 = 4" in out


def test_explicit_flag_overrides_config(tmp_path, capsys):
    cfg = _write(tmp_path / "cfg.json", {"n": 7})
    rc = main(["solve", "--config", cfg, "--n", "12"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "S_12 = 5" in out


def test_config_unknown_key(tmp_path, capsys):
    cfg = _write(tmp_path / "cfg.json", {"frobnicate": 1})
    rc = main(["solve", "--config", cfg])
    err = capsys.readouterr().err
    assert rc == 2
    assert "unknown config key" in err


def test_config_malformed(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[", encoding="utf-8")
    rc = main(["solve", "--config", str(cfg)])
    assert rc == 2
    assert "config" in capsys.readouterr().err


def test_no_timestamp_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    set_file = _write(tmp_path / "s.json", {"n": 7, "elements": [1, 2, 5, 7]})
    for path in (a, b):
        rc = main(["sums", set_file, "--weighted", "--lindstrom",
                   "--out", str(path), "--no-timestamp"])
        assert rc == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_timestamp_present_by_default(tmp_path, capsys):
    out_file = tmp_path / "fit.json"
    rc = main(["scan", "exponent", "--out", str(out_file)])
    capsys.readouterr()
    assert rc == 0
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert "generated_at" in data
    assert data["generated_at"].endswith("+00:00")


def test_scan_exponent(tmp_path, capsys):
    out_file = tmp_path / "fit.json"
    rc = main(["scan", "exponent", "--ell", "1", "--out", str(out_file),
               "--no-timestamp"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "slope=" in out
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert data["kind"] == "exponent-fit" and data["ell"] == 1
    # primes in [11, 199]: 42 of them, all contributing unless error is 0
    assert data["points_used"] + data["zeros_excluded"] == 42
    assert data["slope"] < 1.525


def test_scan_mean_error(tmp_path, capsys):
    out_file = tmp_path / "scan.json"
    rc = main(["scan", "mean-error", "--n", "25", "--out", str(out_file),
               "--no-timestamp"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "mean-error n_max=25 family=exact:" in out
    assert "note:" in out
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert data["n_max"] == 25 and len(data["per_n_error"]) == 25


def test_scan_mean_error_requires_n(capsys):
    rc = main(["scan", "mean-error"])
    assert rc == 2
    assert "requires --n" in capsys.readouterr().err


def test_scan_mean_error_bose_family(capsys):
    rc = main(["scan", "mean-error", "--n", "500",
               "--family", "bose-nearest"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "family=bose-nearest" in out
    assert "NOT" in out                       # the stand-in caveat is printed


def test_scan_discrepancy_set_file(tmp_path, capsys):
    set_file = _write(tmp_path / "b13.json",
                      {"n": 168,
                       "elements": list(bose_integer(13).elements)})
    csv_file = tmp_path / "recs.csv"
    out_file = tmp_path / "d.json"
    rc = main(["scan", "discrepancy", set_file, "--table", str(csv_file),
               "--out", str(out_file), "--no-timestamp"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "n=168 t=13:" in out
    assert "violations=0" in out
    lines = csv_file.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "n,lo,hi,count,expected,e_i,budget,ok"
    assert len(lines) > 200
    assert all(line.endswith(",true") for line in lines[1:])
    data = json.loads(out_file.read_text(encoding="utf-8"))
    assert data["violations"] == 0
    assert data["interval_records"] == len(lines) - 1


def test_scan_unknown_kind_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["scan", "fourier"])
    capsys.readouterr()
