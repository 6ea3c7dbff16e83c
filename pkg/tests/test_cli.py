import csv
import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from pqwiener.cli import load_json, main

GOLDEN = Path(__file__).parent / "golden"


def run(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "pqwiener", *args], input=stdin, capture_output=True, text=True, timeout=120
    )
    return proc.returncode, proc.stdout, proc.stderr


def payload(out: str):
    assert out.startswith("# pqwiener ")
    return json.loads("\n".join(out.splitlines()[1:]))


def test_verify_fourier_suite():
    code, out, _ = run("verify", "--suite", "fourier", "--p", "2", "--q", "5", "--level", "3")
    assert code == 0
    assert out.splitlines()[1].startswith("round-trip OK, homomorphism OK, parseval OK")


@pytest.mark.parametrize("suite,p", [("aq", "2"), ("wtt", "3")])
def test_other_suites(suite, p):
    code, out, _ = run("verify", "--suite", suite, "--p", p, "--q", "7", "--level", "4")
    assert code == 0 and "OK" in out


def test_aq_csv_matches_golden_and_law():
    code, out, _ = run("aq", "--q", "5", "--z", "-1", "--N", "8", "--emit", "csv")
    assert code == 0
    assert out == (GOLDEN / "aq_q5_minus1_N8.csv").read_text()
    rows = list(csv.DictReader(io.StringIO("\n".join(out.splitlines()[1:]))))
    assert len(rows) == 8
    assert [int(r["increment_valuation"]) for r in rows] == list(range(8))
    for r in rows:
        assert set(r) == {"z", "N", "value_num", "value_den", "increment_valuation"}
        Fraction(int(r["value_num"]), int(r["value_den"]))


def test_aq_json_and_determinism():
    a = run("aq", "--z", ":01", "--N", "6", "--emit", "json")
    b = run("aq", "--z", ":01", "--N", "6", "--emit", "json")
    assert a == b and a[0] == 0
    rows = payload(a[1])["rows"]
    assert rows[0]["z"] == ":01" and len(rows) == 6


def test_wtt_check_rank_deficient():
    code, out, _ = run("wtt-check", stdin='{"level": 1, "values": ["1", "0"]}')
    assert code == 0
    rep = payload(out)
    assert rep["circulant_rank_full"] is False and rep["zero_set"] == [1] and rep["consistent"]


def test_transform_inverse_round_trip(tmp_path):
    f = {"level": 2, "values": ["1", "1/2", "0", "-3"]}
    src = tmp_path / "f.json"
    src.write_text(json.dumps(f))
    code, out, _ = run("transform", str(src))
    assert code == 0
    dual = tmp_path / "F.json"
    dual.write_text(out)  # the header line is skipped on read
    code, out, _ = run("inverse", str(dual))
    assert code == 0 and payload(out) == f


def test_convolve_both_domains(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps({"level": 1, "values": ["1", "0"]}))
    b.write_text(json.dumps({"level": 1, "values": ["1", "1"]}))
    code, out, _ = run("convolve", "--domain", "zp", str(a), str(b))
    assert code == 0 and payload(out)["values"] == ["1/2", "1/2"]
    a.write_text(json.dumps({"support": [{"t": "1/2", "v": "1"}]}))
    b.write_text(json.dumps({"support": [{"t": "1/4", "v": "2"}]}))
    code, out, _ = run("convolve", "--domain", "dual", str(a), str(b))
    assert payload(out) == {"support": [{"t": "3/4", "v": "2"}]}


def test_malformed_json_reports_line():
    code, _, err = run("transform", stdin='{\n  "level": 1,\n  "values": [1,\n')
    assert code == 2 and "line 4" in err


def test_bad_config_is_input_error():
    code, _, err = run("field-info", "--p", "5", "--q", "5")
    assert code == 2 and "distinct" in err


def test_field_info():
    code, out, _ = run("field-info", "--p", "2", "--q", "5", "--N", "2", "--precision", "3")
    info = payload(out)
    assert code == 0 and info["f"] == 1 and info["g"] == ["57", "1"] and info["zeta_image"] == ["68"]


MEASURE = {
    "p": 2,
    "terms": [
        {"coeff": "1", "shift": "0", "base": {"kind": "aq_product", "q": 5}},
        {"coeff": "-1/3", "shift": "0", "base": {"kind": "dirac_zero"}},
    ],
}


def test_witness_command(tmp_path):
    m = tmp_path / "mu.json"
    m.write_text(json.dumps(MEASURE))
    combo = json.dumps([{"coeff": "2", "shift": "1/4"}, {"coeff": "1", "shift": "3/8"}])
    code, out, _ = run("witness", "--measure", str(m), "--z0", ":1", "--combo", combo)
    w = payload(out)
    assert code == 0 and w["verdict"] is True and w["identity_ok"] is True and w["N_star"] >= 3


def test_witness_precondition_fails(tmp_path):
    m = tmp_path / "mu.json"
    m.write_text(json.dumps({"p": 2, "terms": [{"coeff": "1", "shift": "0", "base": {"kind": "dirac_zero"}}]}))
    code, _, err = run("witness", "--measure", str(m), "--z0", ":1")
    assert code == 1 and "precondition unverified" in err


def test_scan_command(tmp_path):
    m = tmp_path / "mu.json"
    m.write_text(json.dumps({"p": 2, "terms": [MEASURE["terms"][0]]}))
    code, out, _ = run("scan", "--measure", str(m), "--c", "1/3", "--candidates", "0", "1", ":1", "--N-max", "6")
    assert code == 0
    lines = out.splitlines()
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:-1]))))
    assert [r["attained"] for r in rows] == ["false", "false", "true"]
    assert lines[-1].startswith("# conclusion: not dense")


def test_main_in_process(capsys):
    assert main(["aq", "--z", "3", "--N", "4"]) == 0
    assert "increment_valuation" in capsys.readouterr().out


def test_load_json_skips_header(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("# pqwiener 0.1.0\n{\"a\": 1}\n")
    assert load_json(str(p)) == {"a": 1}
