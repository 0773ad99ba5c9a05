import argparse
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from hardybounds.cli import main, parse_h_list
from hardybounds.report import (
    load_schema,
    load_spec,
    parse_spec,
    read_csv,
    validate_report,
)

SPECS = Path(__file__).resolve().parent.parent / "specs"


def _run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_bound_square(tmp_path, capsys):
    assert _run(tmp_path, "bound", "--spec", str(SPECS / "square.json")) == 0
    assert "method=convex r=0.5" in capsys.readouterr().out
    cert = json.loads((tmp_path / "square_certificate.json").read_text())
    assert cert["r"] == 0.5
    validate_report(json.loads((tmp_path / "square_report.json").read_text()))


def test_bound_horseshoe_uses_cutdisk(tmp_path):
    assert _run(tmp_path, "bound", "--spec", str(SPECS / "horseshoe_pi3.json")) == 0
    cert = json.loads((tmp_path / "horseshoe_pi3_certificate.json").read_text())
    assert cert["method"] == "cutdisk" and cert["inputs"]["theta0"] == 0.0


def test_bound_cut_plane(tmp_path):
    assert _run(tmp_path, "bound", "--spec", str(SPECS / "cutplane.json")) == 0
    cert = json.loads((tmp_path / "cutplane_certificate.json").read_text())
    assert cert["method"] in ("cone", "ancona") and cert["r"] == 0.25


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(tmp_path, "bound", "--spec", str(bad)) == 2
    bad.write_text(json.dumps({"version": 1, "name": "x", "domain": {"kind": "blob"}}))
    assert _run(tmp_path, "bound", "--spec", str(bad)) == 2
    assert _run(tmp_path, "bound", "--spec", str(tmp_path / "missing.json")) == 2


def test_exit_code_precondition(tmp_path):
    spec = tmp_path / "sq.json"
    spec.write_text(json.dumps({"version": 1, "name": "sq", "cutdisk": {"a": 0.1, "theta0": 0.0},
                                "domain": {"kind": "polygon",
                                           "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}}))
    assert _run(tmp_path, "bound", "--spec", str(spec), "--method", "cutdisk") == 3


def test_exit_code_no_bound(tmp_path):
    assert _run(tmp_path, "bound", "--spec", str(SPECS / "cutplane.json"), "--method", "cutdisk") == 4


def test_check_conditions_writes_tables(tmp_path):
    assert _run(tmp_path, "check-conditions", "--spec", str(SPECS / "lshape.json"), "--svg") == 0
    tag, rows = read_csv(tmp_path / "lshape_cone.csv")
    assert tag == "hardybounds/cone-witnesses/v1"
    assert max(float(r["theta_w"]) for r in rows) == pytest.approx(2.356194490192345, abs=1e-12)
    assert (tmp_path / "lshape_cone.svg").exists()


def test_koebe_verify(tmp_path, capsys):
    assert main(["koebe-verify", "--out", str(tmp_path), "--map", "koebe", "--map", "mobius"]) == 0
    assert "0 failed" in capsys.readouterr().out
    _, rows = read_csv(tmp_path / "koebe.csv")
    ratios = {r["map"]: float(r["ratio"]) for r in rows if r["check"] == "koebe"}
    assert ratios["koebe"] == pytest.approx(0.25, abs=1e-12)
    assert ratios["mobius"] == pytest.approx(0.5, abs=1e-12)


def test_rayleigh_and_report_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["report", "--spec", str(SPECS / "square.json"), "--out", str(out),
                     "--h", "1/8, 1/16"]) == 0
    files = sorted(p.name for p in a.iterdir())
    assert "square_mode.svg" in files and "square_rayleigh.csv" in files
    for name in files:
        if name.endswith("_timings.json"):
            continue
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    rep = json.loads((a / "square_report.json").read_text())
    validate_report(rep)
    assert all(rep["verdicts"].values())


def test_spec_round_trip():
    for path in sorted(SPECS.glob("*.json")):
        spec = load_spec(path)
        again = parse_spec(json.loads(json.dumps(spec.to_dict())))
        assert again.to_dict() == spec.to_dict()
        jsonschema.validate(spec.to_dict(), load_schema("domain_spec"))


def test_parse_h_list():
    assert parse_h_list("1/16, 1/32") == (1 / 16, 1 / 32)
    assert parse_h_list("0.1 0.05") == (0.1, 0.05)
    with pytest.raises(argparse.ArgumentTypeError):
        parse_h_list("1/0")


def test_module_entry_point_with_thread_cap(tmp_path):
    env = {"HARDY_THREADS": "1", "PATH": "/usr/bin:/bin"}
    proc = subprocess.run([sys.executable, "-m", "hardybounds", "bound", "--spec",
                           str(SPECS / "lshape.json"), "--out", str(tmp_path)],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert "method=cone" in proc.stdout
