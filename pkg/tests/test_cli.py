import json

import numpy as np
import pytest

from rydjt.cli import main


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = json.loads(lines[0][2:])
    cols = lines[1].split(",")
    data = np.array([[float(x) for x in l.split(",")] for l in lines[2:]])
    return header, cols, data


def test_spectrum_without_coupling(tmp_path):
    out = tmp_path / "s.csv"
    argv = ["spectrum", "--kappa", "0", "--rabi-min", "0.2", "--rabi-max", "1", "--steps", "3",
            "--nmax", "1", "--levels", "2", "--out", str(out)]
    assert main(argv) == 0
    header, cols, data = _read_csv(out)
    assert cols == ["rabi", "level_0", "level_1", "pt_gs", "pt_jt"]
    assert header["command"] == "spectrum" and header["format"] == "rydjt-1"
    assert np.allclose(data[:, 1], -2 * data[:, 0])
    assert np.allclose(data[:, 3], -2 * data[:, 0])
    assert np.all(np.isnan(data[:, 4]))
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_spectrum_usage_errors(tmp_path, capsys):
    out = str(tmp_path / "s.csv")
    assert main(["spectrum", "--kappa", "0", "--rabi-min", "1", "--rabi-max", "0.5",
                 "--steps", "3", "--out", out]) == 2
    assert main(["spectrum", "--kappa", "0", "--omega", "0", "--out", out]) == 2
    assert "omega" in capsys.readouterr().err


def test_bo_outputs(tmp_path):
    prefix = tmp_path / "run"
    assert main(["bo", "--kappa", "0.5", "--rabi-min", "0", "--rabi-max", "1", "--steps", "3",
                 "--grid", "6", "--out-prefix", str(prefix)]) == 0
    _, cols, data = _read_csv(tmp_path / "run_transition.csv")
    assert cols == ["rabi", "e_min", "q_min_norm", "multiplicity"]
    assert len(data) == 3
    assert data[0, 3] == 3 and data[-1, 3] == 1
    for i in range(3):
        header, cols, surf = _read_csv(tmp_path / f"run_surface_{i:03d}.csv")
        assert cols == ["q2", "q3", "e0"] and surf.shape == (36, 3)
        assert header["slice_rabi"] == data[i, 0]


def test_jt_report(tmp_path):
    out = tmp_path / "jt.json"
    assert main(["jt", "--kappa", "0", "--rabi", "0", "--nmax", "1", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["entropy_nats"] == pytest.approx(0.0, abs=1e-12)
    assert rep["fidelity_vs_ed"] == pytest.approx(1.0)
    assert rep["ground_degeneracy"] == 6
    assert rep["gram_offdiagonal"] == pytest.approx(1.0)


def test_jt_truncation_exit_code(capsys):
    assert main(["jt", "--kappa", "3", "--rabi", "0", "--nmax", "2"]) == 3
    assert "nmax" in capsys.readouterr().err


def test_physical(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"trap_hz": 70e3, "spacing_um": 5.0, "c6_ghz_um6": 88.0}))
    assert main(["physical", str(cfg)]) == 2
    assert "mass_kg" in capsys.readouterr().err
    assert main(["physical", str(cfg), "--species", "K39"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert 330 <= rep["distortion_nm"] <= 370
    assert rep["config"]["species"] == "K39"


def test_physical_missing_key(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"trap_hz": 70e3, "species": "K39", "c6_ghz_um6": 88.0}))
    assert main(["physical", str(cfg)]) == 2
    assert "spacing_um" in capsys.readouterr().err


def test_verify_quick_json(capsys):
    code = main(["verify", "--quick", "--json"])
    rep = json.loads(capsys.readouterr().out)
    assert code == (0 if rep["passed"] else 1)
    assert len(rep["checks"]) == 6
    assert all(c["passed"] for c in rep["checks"])


def test_threads_flag(tmp_path, monkeypatch):
    monkeypatch.delenv("RYDJT_THREADS", raising=False)
    out = tmp_path / "s.csv"
    assert main(["--threads", "2", "spectrum", "--kappa", "0.2", "--steps", "2", "--nmax", "1",
                 "--levels", "2", "--out", str(out)]) == 0
