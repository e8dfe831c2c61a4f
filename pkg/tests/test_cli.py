import csv
import io
import json
import math
import subprocess
import sys

import pytest

from abring.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, data, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def one_line_error(err):
    lines = err.strip().splitlines()
    return len(lines) == 1 and lines[0].startswith("abring: error: ")


def test_transmit_blocked(capsys):
    code, out, _ = run(capsys, "transmit", "--eu-re", "0", "--ed-re", "0", "--phi",
                       "3.141592653589793", "--gamma", "0.1", "--k", "1.5707963")
    assert code == 0
    assert json.loads(out)["T"] == pytest.approx(0.0, abs=1e-20)


def test_transmit_gain_exceeds_unity(capsys):
    code, out, _ = run(capsys, "transmit", "--eu-im", "0.19", "--ed-im", "-0.19", "--phi",
                       "3.141592653589793", "--gamma", "0.1", "--k", "1.5707963", "--engine", "both")
    d = json.loads(out)
    assert code == 0 and d["T"] > 1 and d["G"] == d["T"]
    assert d["discrepancy"] <= 1e-9 * d["T"]


def test_transmit_singular_point(capsys):
    code, out, _ = run(capsys, "transmit", "--phi", "0")
    d = json.loads(out)
    assert code == 0 and d["singular"] is True
    assert d["T"] == pytest.approx(1.0, abs=1e-12)
    assert d["tau"]["re"] == pytest.approx(1.0, abs=1e-12)


def test_transmit_phi_in_pi_and_allocations(capsys):
    res = []
    for alloc in ("symmetric", "asymmetric", "random"):
        code, out, _ = run(capsys, "transmit", "--eu-re", "0.1", "--eu-im", "0.05", "--ed-re",
                           "-0.2", "--phi", "0.5", "--phi-in-pi", "--alloc", alloc, "--seed", "5")
        assert code == 0
        res.append(json.loads(out)["T"])
    assert max(res) - min(res) <= 1e-12 * max(res)


def test_transmit_bad_input(capsys):
    code, _, err = run(capsys, "transmit", "--k", "4")
    assert code == 2 and one_line_error(err)
    code, _, err = run(capsys, "transmit", "--gamma", "-1")
    assert code == 2 and one_line_error(err)
    code, _, err = run(capsys, "transmit", "--engine", "nope")
    assert code == 2 and one_line_error(err)


def test_sweep_two_rows(tmp_path, capsys):
    cfg = write_config(tmp_path, {"sweep": {"variable": "epsilon_common", "start": -1,
                                             "stop": 1, "points": 2}})
    code, out, _ = run(capsys, "sweep", cfg)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["x", "T", "G", "re_tau", "im_tau", "re_r", "im_r", "singular"]
    assert len(rows) == 3


def test_sweep_balanced_zero_flux_dip(tmp_path, capsys):
    out_csv = tmp_path / "d.csv"
    cfg = write_config(tmp_path, {
        "Gamma": 0.1, "E_u": [0, 0.05], "E_d": [0, -0.05], "phi": 0,
        "sweep": {"variable": "epsilon_common", "start": -1, "stop": 1, "points": 2001},
        "output": {"csv": str(out_csv), "svg": str(tmp_path / "d.svg")}})
    assert run(capsys, "sweep", cfg)[0] == 0
    rows = list(csv.DictReader(out_csv.open()))
    low = min(rows, key=lambda r: float(r["G"]))
    assert float(low["x"]) == 0.0 and float(low["G"]) <= 1e-12
    assert (tmp_path / "d.svg").read_text().startswith("<?xml")


def test_sweep_engine_both(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "E_u": [0.1, 0], "E_d": [-0.3, 0], "phi": 1.1,
        "sweep": {"variable": "epsilon_common", "start": -1, "stop": 1, "points": 101,
                  "engine": "both"}})
    code, out, err = run(capsys, "sweep", cfg)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and "discrepancy" in rows[0]
    assert max(float(r["discrepancy"]) for r in rows) <= 1e-9
    assert json.loads(err)["max_discrepancy"] <= 1e-9


def test_sweep_csv_override_is_byte_stable(tmp_path, capsys):
    cfg = write_config(tmp_path, {"E_u": [0, 0.02], "phi": 1.0, "sweep": {
        "variable": "phi", "start": 0, "stop": 6, "points": 50}})
    run(capsys, "sweep", cfg, "--csv", str(tmp_path / "a.csv"))
    run(capsys, "sweep", cfg, "--csv", str(tmp_path / "b.csv"))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize("data, field", [
    ({"E_u": [0, 0], "phy": 1.0}, "phy"),
    ({"sweep": {"variable": "epsilon_common", "start": 0, "stop": 1, "points": 5, "step": 1}},
     "sweep.step"),
    ({"sweep": {"variable": "epsilon_common", "start": 1, "stop": 0, "points": 5}}, "sweep.stop"),
    ({"t": 0.3, "Gamma": 0.1}, "Gamma"),
    ({"k": 3.5}, "k"),
    ({"E_u": [0, 1, 2]}, "E_u"),
])
def test_sweep_schema_errors(tmp_path, capsys, data, field):
    code, _, err = run(capsys, "sweep", write_config(tmp_path, data))
    assert code == 2 and one_line_error(err)
    assert f"config: {field}:" in err


def test_sweep_bad_json_reports_line(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "phi": 1.0,\n  "t0": ,\n}\n')
    code, _, err = run(capsys, "sweep", str(p))
    assert code == 2 and one_line_error(err) and "line 3" in err


def test_sweep_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", str(tmp_path / "nope.json"))
    assert code == 2 and one_line_error(err)


def test_gauge_check_default(capsys):
    code, out, _ = run(capsys, "gauge-check", "--trials", "1000", "--seed", "7")
    d = json.loads(out)
    assert code == 0 and d["passed"] and d["max_spread"] <= 1e-9
    assert d["max_phase_error"] <= 1e-12


def test_gauge_check_hermitian(capsys):
    code, out, _ = run(capsys, "gauge-check", "--trials", "200", "--seed", "1", "--hermitian")
    d = json.loads(out)
    assert code == 0 and d["max_unitarity_defect"] <= 1e-10


def test_gauge_check_zero_flux_config(tmp_path, capsys):
    cfg = write_config(tmp_path, {"E_u": [0.2, 0.1], "E_d": [-0.1, 0.0], "phi": 0})
    code, out, _ = run(capsys, "gauge-check", "--trials", "1", "--config", cfg)
    d = json.loads(out)
    assert code == 0 and d["allocations_identical"] is True and d["max_spread"] <= 1e-12


def test_gauge_check_bad_flags(capsys):
    code, _, err = run(capsys, "gauge-check", "--trials", "0")
    assert code == 2 and one_line_error(err)
    code, _, err = run(capsys, "gauge-check", "--trials", "many")
    assert code == 2 and one_line_error(err)


def fano_config(tmp_path, gu, gd, phi, **sweep):
    s = {"variable": "epsilon_common", "start": -0.1, "stop": 0.1, "points": 401}
    s.update(sweep)
    return write_config(tmp_path, {"Gamma": 0.1, "E_u": [0, gu], "E_d": [0, gd], "phi": phi,
                                   "sweep": s})


def test_fano_quarter_flux(tmp_path, capsys):
    code, out, _ = run(capsys, "fano", fano_config(tmp_path, 0.05, -0.05, math.pi / 2))
    d = json.loads(out)
    assert code == 0
    assert d["q_theory"] == pytest.approx(-0.05, rel=1e-12)
    assert d["q_energy"] == pytest.approx(-0.05, rel=0.1)
    assert d["lineshape"] == "fano"


def test_fano_zero_flux(tmp_path, capsys):
    code, out, _ = run(capsys, "fano", fano_config(tmp_path, 0.05, 0.05, 0.0))
    d = json.loads(out)
    assert code == 0 and d["q_theory"] == 0 and abs(d["q"]) <= 0.05
    assert d["lineshape"] == "symmetric"


def test_fano_half_flux_quantum(tmp_path, capsys):
    code, out, _ = run(capsys, "fano", fano_config(tmp_path, 0.05, -0.05, math.pi))
    d = json.loads(out)
    assert code == 0 and d["q_theory"] is None and d["q_theory_infinite"] is True
    assert d["lineshape"] == "lorentzian"


def test_fano_rejects_wrong_sweep(tmp_path, capsys):
    cfg = write_config(tmp_path, {"sweep": {"variable": "phi", "start": 0, "stop": 1,
                                            "points": 50}})
    code, _, err = run(capsys, "fano", cfg)
    assert code == 2 and one_line_error(err)


def test_fano_fit_failure_exit_code(tmp_path, capsys):
    # gamma = 0 at half a flux quantum: G vanishes identically, nothing to fit
    code, _, err = run(capsys, "fano", fano_config(tmp_path, 0.0, 0.0, math.pi))
    assert code == 4 and one_line_error(err)


def test_fig2(tmp_path, capsys):
    code, out, _ = run(capsys, "fig2", "--out", str(tmp_path / "f"))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    for p in "abcd":
        rows = list(csv.reader((tmp_path / "f" / f"fig2_{p}.csv").open()))
        assert rows[0] == ["x", "G_phi_0", "G_phi_0.5pi", "G_phi_pi"]
        assert len(rows) == 2002
        assert (tmp_path / "f" / f"fig2_{p}.svg").exists()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "abring", "transmit", "--phi", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "T" in json.loads(res.stdout)
    res = subprocess.run([sys.executable, "-m", "abring"], capture_output=True, text=True,
                         check=False)
    assert res.returncode == 2 and res.stderr.startswith("abring: error: usage:")
