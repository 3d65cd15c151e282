import csv
import io
import json
import subprocess
import sys

import pytest

from qpyc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(out):
    lines = out.splitlines()
    manifest = json.loads(lines[0].removeprefix("# manifest "))
    notes = dict(l[2:].split(": ", 1) for l in lines[1:] if l.startswith("# "))
    body = [l for l in lines if not l.startswith("#")]
    return manifest, notes, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_keyrate_anchor(capsys):
    code, out, _ = run(capsys, "keyrate", "--code", "qpyc:1", "--Ltot", "700")
    assert code == 0
    manifest, _, rows = parse(out)
    assert manifest["command"] == "keyrate" and "timestamp" not in manifest
    assert 5e3 <= float(rows[0]["R[1/s]"]) <= 20e3
    assert rows[0]["hops[count]"] == "700"


def test_output_is_byte_identical(capsys):
    argv = ("percolate", "--D", "3,5", "--pl", "0.3", "--runs", "5000", "--seed", "4")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--threads", "3")
    assert a == b
    _, c, _ = run(capsys, *argv, "--timestamp")
    assert "timestamp" in parse(c)[0]


def test_fig1_crossover_note(capsys):
    code, out, _ = run(capsys, "fig1", "--points", "11")
    _, notes, rows = parse(out)
    assert code == 0 and len(rows) == 22
    assert abs(float(notes["bits_per_mode_crossover_p_l"]) - 0.4275) < 1e-3


def test_table1_small(capsys):
    code, out, _ = run(capsys, "table1", "--runs", "2000", "--geometry", "both")
    _, _, rows = parse(out)
    assert code == 0 and len(rows) == 8
    assert {r["k"] for r in rows} == {"6", "9", "15", "21"}


def test_fig3_and_fig4(capsys):
    code, out, _ = run(capsys, "fig3", "--k", "1,3", "--D", "3", "--points", "3", "--runs", "2000")
    assert code == 0 and len(parse(out)[2]) == 9
    code, out, _ = run(capsys, "fig4", "--k", "1", "--eps", "0", "--Lmax", "200", "--step", "100")
    assert code == 0 and len(parse(out)[2]) == 2


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--code", "4qubit", "--states", "2", "--erase", "1")
    _, notes, rows = parse(out)
    assert code == 0 and float(notes["min_fidelity"]) > 1 - 1e-9
    assert all(r["status"] == "corrected" for r in rows)
    code, out, _ = run(capsys, "simulate", "--tec", "--states", "1", "--erase", "2")
    assert code == 0 and parse(out)[2][0]["status"] == "corrected"


def test_usage_errors(capsys):
    assert run(capsys, "simulate", "--code", "qpc:2,2")[0] == 2
    assert run(capsys, "simulate", "--erase", "7")[0] == 2
    assert run(capsys, "keyrate", "--code", "surface:3")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "keyrate", "--L0", "-1")[0] == 2


def test_infeasible_exit_code(capsys):
    code, _, err = run(capsys, "costs", "--Ltot", "1000", "--eps-g", "0.01")
    assert code == 3 and "infeasible" in err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "k.toml"
    cfg.write_text('code = "qpyc:2"\nLtot = 300.0\neps-g = 1e-5\n')
    code, out, _ = run(capsys, "keyrate", "--config", str(cfg))
    manifest, _, rows = parse(out)
    assert code == 0 and manifest["params"]["eps_g"] == 1e-5
    assert rows[0]["code"] == "[[5,1,3]]_5"
    # explicit flags win over the file
    _, out, _ = run(capsys, "keyrate", "--config", str(cfg), "--Ltot", "100")
    assert parse(out)[2][0]["L_tot[km]"] == "100.0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"warp": 9}))
    assert run(capsys, "keyrate", "--config", str(bad))[0] == 2


def test_out_file(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    assert run(capsys, "keyrate", "--out", str(path))[0] == 0
    assert capsys.readouterr().out == ""
    assert path.read_text().startswith("# manifest ")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qpyc", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()


@pytest.mark.slow
def test_costs_command(capsys):
    code, out, _ = run(capsys, "costs")
    rows = parse(out)[2]
    assert code == 0 and len(rows) == 4
