import csv
import io
import json
import subprocess
import sys

import pytest

from tdlandau import verify
from tdlandau.cli import main, parse_complex, parse_grid, render


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_stats_small_label(capsys):
    code, out, _ = run(capsys, "stats", "--ell", "2", "--z", "1e-3")
    assert code == 0
    (rec,) = rows(out)
    assert float(rec["g2"]) == pytest.approx(0.75, abs=1e-3)


def test_pnd_peak(capsys):
    code, out, _ = run(capsys, "pnd", "--ell", "1.5", "--z2", "6")
    assert code == 0
    recs = rows(out)
    probs = [float(r["probability"]) for r in recs]
    assert int(recs[probs.index(max(probs))]["n"]) == 1
    assert sum(probs) == pytest.approx(1.0, abs=1e-13)


def test_numeric_format(capsys):
    _, out, _ = run(capsys, "stats", "--ell", "1", "--grid", "0.5:1:2")
    header, first = out.splitlines()[:2]
    assert header == "r,mean_n,mean_n2,g2,q"
    assert first.split(",")[0] == "5.000000000000e-01"


def test_json_mirrors_csv(capsys):
    _, a, _ = run(capsys, "weight", "--ell", "1.5", "--grid", "0.5:2:3")
    _, b, _ = run(capsys, "weight", "--ell", "1.5", "--grid", "0.5:2:3", "--format", "json")
    recs = json.loads(b)
    for r_csv, r_json in zip(rows(a), recs):
        assert float(r_csv["weight"]) == r_json["weight"]


def test_output_is_byte_identical(tmp_path, capsys):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (p1, p2):
        assert main(["wigner", "--ell", "0.5", "--z", "1,0.5", "--grid=-1:1:3", "--pgrid", "0:1:2", "--out", str(p)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_figures_subset(tmp_path):
    assert main(["figures", "--only", "f2,f10", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "f2.csv").exists() and (tmp_path / "f10.csv").exists()


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("ell = 2\nz = 0.001,0\n")
    code, out, _ = run(capsys, "stats", "--config", str(cfg))
    assert code == 0
    assert float(rows(out)[0]["g2"]) == pytest.approx(0.75, abs=1e-3)
    # flags win over the file
    code, out, _ = run(capsys, "stats", "--config", str(cfg), "--ell", "0.5")
    assert float(rows(out)[0]["g2"]) == pytest.approx(1.5 / 2.5, abs=1e-3)


def test_config_error_diagnostics(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("ell = 2\n\nbogus = 1\n")
    code, _, err = run(capsys, "stats", "--config", str(cfg))
    assert code == 2
    assert "line 3" in err and "bogus" in err
    cfg.write_text("ell = two\n")
    code, _, err = run(capsys, "stats", "--config", str(cfg), "--z", "1")
    assert code == 2 and "line 1" in err


def test_profile_file_and_experimental_gate(tmp_path, capsys):
    prof = tmp_path / "p.cfg"
    prof.write_text("kind = modulated_omega\ndepth = 0.2\n")
    code, out, _ = run(capsys, "ermakov", "--profile", str(prof), "--grid", "0:2:3")
    assert code == 0 and len(rows(out)) == 3
    code, _, err = run(capsys, "wigner", "--profile", str(prof), "--time", "1", "--rho0", "0.8", "--z", "1",
                       "--grid=0:1:2", "--pgrid", "0:1:2")
    assert code == 2 and "varpi" in err


def test_argument_errors(capsys):
    assert run(capsys, "stats", "--z", "1", "--z2", "1")[0] == 2
    assert run(capsys, "pnd", "--ell", "1")[0] == 2
    assert run(capsys, "pnd", "--z", "1", "--tol", "0")[0] == 2
    assert run(capsys, "weight", "--grid", "1:0:5")[0] == 2
    with pytest.raises(ValueError):
        parse_complex("1,2,3")
    with pytest.raises(ValueError):
        parse_grid("1:2")
    assert parse_complex("0.5,-1") == complex(0.5, -1)
    with pytest.raises(ValueError):
        render(("a",), [(1.0,)], "xml")


def test_verify_quick_exit_status_tracks_failures(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    lines = out.strip().splitlines()
    assert len(lines) == len(verify.FULL) + 1
    assert any(line.startswith("[REPORT] c14") for line in lines)
    failing = [line.split()[1] for line in lines[:-1] if line.startswith("[FAIL]")]
    assert code == (1 if failing else 0)
    if failing:
        assert lines[-1] == "suite: FAIL (" + ", ".join(failing) + ")"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tdlandau", "stats", "--ell", "1", "--z", "0.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("r,mean_n")
