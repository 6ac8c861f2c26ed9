import csv
import json
import math

import pytest

from ioncollide.cli import UsageError, main, parse_frequency, parse_length, parse_range
from ioncollide.scheduler import schedule_from_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_frequency_grammar():
    assert parse_frequency("2pi*10MHz") == pytest.approx(2 * math.pi * 1e7)
    assert parse_frequency("10MHz") == pytest.approx(1e7)
    assert parse_frequency("6.28e7") == 6.28e7
    with pytest.raises(UsageError):
        parse_frequency("10 furlongs")


def test_length_and_range():
    assert parse_length("103um") == pytest.approx(103e-6)
    r = parse_range("10um:1mm:25:log")
    assert len(r) == 25 and r[0] == pytest.approx(1e-5) and r[-1] == pytest.approx(1e-3)
    with pytest.raises(UsageError):
        parse_range("1mm:10um:5")


def test_design_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "design", "--species", "Yb-171",
                       "--omega-xy", "2pi*10MHz", "--omega-perp", "5")
    assert code == 0
    rec = json.loads(out)
    assert rec["L_um"] == pytest.approx(103, rel=0.02)
    assert rec["J_over_hbar_rad_s"] == pytest.approx(190, rel=0.05)
    assert rec["alpha"] == pytest.approx(1.0)


def test_species_listing(capsys):
    code, out, _ = run(capsys, "species")
    assert code == 0 and "Yb-171" in out and "electron" in out
    code, _, err = run(capsys, "species", "Ca-40")
    assert code == 2 and "Yb-171" in err


def test_unknown_species_usage_error(capsys):
    code, _, err = run(capsys, "design", "--species", "Xx", "--omega-xy", "1e7", "--omega-perp", "5")
    assert code == 2


def test_bad_frequency(capsys):
    code, _, err = run(capsys, "design", "--omega-xy", "ten", "--omega-perp", "5")
    assert code == 2 and "frequency" in err


def test_regime_error_exit_one(capsys):
    # omega_z above omega_xy is rejected as a usage error; a trap too close for the
    # renormalised form with the classical method is a regime error
    code, _, _ = run(capsys, "coupling", "--omega-xy", "2pi*10MHz", "--omega-perp", "5",
                     "--L", "5um", "--method", "classical")
    assert code == 0
    code, _, err = run(capsys, "coupling", "--omega-xy", "2pi*10MHz", "--omega-perp", "5",
                       "--L", "103um", "--method", "classical")
    assert code == 1 and "alpha" in err


def test_classical_notice(capsys):
    code, _, err = run(capsys, "coupling", "--omega-xy", "2pi*10MHz", "--omega-perp", "5",
                       "--L", "5um", "--method", "quadrature")
    assert code == 0 and "switched" in err


def test_sweep_csv_and_table(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("IONCOLLIDE_OUTPUT_DIR", str(tmp_path))
    args = ["sweep", "--species", "Yb-171", "--omega-xy", "2pi*10MHz", "--omega-perp", "5",
            "--L", "10um:1mm:25:log", "--output", "s.csv"]
    code, table, _ = run(capsys, *args)
    assert code == 0
    with open(tmp_path / "s.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 25
    L = [float(r["L"]) for r in rows]
    assert all(b > a for a, b in zip(L, L[1:]))
    assert (tmp_path / "s.gp").exists()
    code, out, _ = run(capsys, "--format", "csv", *args)
    rows2 = list(csv.DictReader(out.splitlines()))
    for r1, r2 in zip(rows, rows2):
        for k in ("L", "J_over_hbar", "alpha"):
            assert float(r1[k]) == pytest.approx(float(r2[k]), rel=1e-12)
    # table values agree with the CSV to the printed precision
    first = table.splitlines()[1].split()
    assert float(first[4]) == pytest.approx(L[0], rel=1e-5)


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("species = Be-9\nomega_xy = 2pi*10MHz\nomega_perp = 5\n")
    code, out, err = run(capsys, "--config", str(cfg), "--format", "json", "design")
    assert code == 0, err
    assert json.loads(out)["L_um"] == pytest.approx(215, rel=0.02)
    # flags override the file
    code, out, _ = run(capsys, "--config", str(cfg), "--format", "json", "design",
                       "--species", "Yb-171")
    assert json.loads(out)["L_um"] == pytest.approx(103, rel=0.02)


def test_gate_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "gate", "--omega-xy", "2pi*10MHz",
                       "--omega-perp", "5")
    assert code == 0
    rec = json.loads(out)
    assert rec["decomposition_residual"] < 1e-12
    assert rec["t_g"] == pytest.approx(0.0125, rel=0.01)


def test_schedule_and_validate(capsys, tmp_path):
    path = tmp_path / "s.txt"
    code, _, _ = run(capsys, "schedule", "--n-traps", "5", "--qubit-a", "q0", "--qubit-b", "q3",
                     "--omega-z", "2pi*2MHz", "--gate-time", "0.01", "--output", str(path))
    assert code == 0
    sched, arr = schedule_from_text(path.read_text())
    assert sched.hold_time() == pytest.approx(9 * sched.gate_time)
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 0 and out.strip() == "valid"
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-3]) + "\n")
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1 and "occupancy" in out
