import json
import shutil

import numpy as np
import pytest

from mtdirac.cli import main
from mtdirac.conservation import QuadratureSpec, component_masses
from mtdirac.scenario import load_scenario
from mtdirac.solver import evaluate_fields

PACKET_CFG = "configs/wavepacket.json"


def _read(path):
    with open(path, newline="") as fh:
        return fh.read()


def test_evaluate_points_roundtrip(tmp_path):
    pts = tmp_path / "points.csv"
    pts.write_text(
        "t1,z1,t2,z2\n"
        "0.25,-1.5,0.125,1.5\n"
        "0.0,0.0,1.0,1.0\n"  # light-like: flagged
        "0.5,-2.0,0.5,2.0\n"
        "0.3,0.5,0.3,0.5\n"  # coincidence: flagged
    )
    out = tmp_path / "out"
    rc = main(
        ["evaluate", "--scenario", PACKET_CFG, "--out", str(out), "--points", str(pts)]
    )
    assert rc == 0
    lines = _read(out / "fields.csv").splitlines()
    raw = _read(PACKET_CFG)
    assert lines[0] == "# mtdirac evaluate"
    assert lines[1] == "# config: " + json.dumps(raw)
    assert lines[2] == "# seed: 0"
    header = lines[3].split(",")
    assert header[:5] == ["t1", "z1", "t2", "z2", "region"]
    assert header[5:7] == ["re_psi1", "im_psi1"] and len(header) == 13
    rows = [line.split(",") for line in lines[4:]]
    assert len(rows) == 4
    assert rows[0][4] == "Omega1" and rows[2][4] == "Omega1"
    assert rows[1][4] == "LightLike" and rows[3][4] == "Coincidence"
    assert all(cell == "" for cell in rows[1][5:])
    assert all(cell == "" for cell in rows[3][5:])
    # %.17g round-trips doubles exactly
    s, _ = load_scenario(raw)
    psi = evaluate_fields(s, 0.25, -1.5, 0.125, 1.5)
    for i in range(4):
        assert float(rows[0][5 + 2 * i]) == psi[i].real
        assert float(rows[0][6 + 2 * i]) == psi[i].imag


def test_evaluate_grid(tmp_path):
    out = tmp_path / "out"
    rc = main(
        [
            "evaluate",
            "--scenario",
            PACKET_CFG,
            "--out",
            str(out),
            "--grid",
            "6",
            "--time",
            "0.5",
        ]
    )
    assert rc == 0
    lines = _read(out / "fields.csv").splitlines()
    rows = [line.split(",") for line in lines[4:]]
    assert len(rows) == 36
    flagged = [r for r in rows if r[4] == "Coincidence"]
    assert len(flagged) == 6  # the grid diagonal
    assert all(r[0] == "0.5" for r in rows)


def test_evaluate_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert (
            main(
                [
                    "evaluate",
                    "--scenario",
                    PACKET_CFG,
                    "--out",
                    str(out),
                    "--grid",
                    "16",
                ]
            )
            == 0
        )
    assert _read(a / "fields.csv") == _read(b / "fields.csv")


def test_verify_passes_on_packet(tmp_path):
    out = tmp_path / "out"
    rc = main(
        [
            "verify",
            "--scenario",
            PACKET_CFG,
            "--out",
            str(out),
            "--panels",
            "64",
            "--grid",
            "128",
        ]
    )
    assert rc == 0
    report = json.loads(_read(out / "verify.json"))
    assert report["all_pass"] is True
    assert report["config_echo"] == _read(PACKET_CFG)
    checks = report["checks"]
    for name in (
        "compatibility",
        "seam_c0",
        "seam_c1",
        "seam_c2",
        "pde_residuals",
        "continuity",
        "boundary_condition",
        "coincidence_flux",
        "conservation_diffs",
        "excluded_pairs",
        "covariance",
        "schmidt",
    ):
        assert name in checks, name
        assert checks[name]["pass"] is True, name
    assert "degenerate" not in checks["conservation_diffs"]
    assert checks["conservation_diffs"]["excluded_pairs"] == 0
    assert len(checks["conservation_diffs"]["values"]) == 5
    assert checks["covariance"]["parts"]["commutation"]["pass"] is True


def test_verify_zero_scenario_is_degenerate(tmp_path):
    cfg = tmp_path / "zero.json"
    cfg.write_text("{}\n")
    out = tmp_path / "out"
    rc = main(
        ["verify", "--scenario", str(cfg), "--out", str(out), "--panels", "8"]
    )
    assert rc == 0
    report = json.loads(_read(out / "verify.json"))
    assert report["all_pass"] is True
    assert report["checks"]["conservation_diffs"]["degenerate"] is True
    assert "schmidt" not in report["checks"]
    assert "seam_c0" not in report["checks"]


def test_verify_fails_on_incompatible_data(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(
        json.dumps(
            {
                "initial": {
                    "g2": {
                        "omega1": {
                            "preset": "product",
                            "params": {
                                "x": {"lo": -1.0, "hi": 1.0, "normalize": True},
                                "y": {"lo": -1.0, "hi": 1.0, "normalize": True},
                            },
                        }
                    }
                }
            }
        )
    )
    out = tmp_path / "out"
    rc = main(
        ["verify", "--scenario", str(cfg), "--out", str(out), "--panels", "16"]
    )
    assert rc == 1
    report = json.loads(_read(out / "verify.json"))
    assert report["all_pass"] is False
    assert report["checks"]["compatibility"]["pass"] is False
    text = capsys.readouterr().out
    assert "FAIL compatibility" in text
    assert "verification FAILED" in text


def test_scatter_series(tmp_path):
    out = tmp_path / "out"
    rc = main(
        [
            "scatter",
            "--scenario",
            PACKET_CFG,
            "--out",
            str(out),
            "--times",
            "0:3.2:5",
            "--panels",
            "32",
            "--grid",
            "96",
        ]
    )
    assert rc == 0
    lines = _read(out / "scatter.csv").splitlines()
    assert lines[0] == "# mtdirac scatter"
    header = lines[3].split(",")
    assert header == [
        "t",
        "mass1",
        "mass2",
        "mass3",
        "mass4",
        "mass_total",
        "sigma1",
        "sigma2",
        "sigma3",
        "sigma4",
    ]
    rows = [line.split(",") for line in lines[4:]]
    assert len(rows) == 5
    times = [float(r[0]) for r in rows]
    assert times == pytest.approx(list(np.linspace(0.0, 3.2, 5)))
    s, _ = load_scenario(_read(PACKET_CFG))
    q = QuadratureSpec(panels=32)
    for r in rows:
        masses = component_masses(s, float(r[0]), q)
        for i in range(4):
            assert float(r[1 + i]) == masses[i]
        assert float(r[5]) == pytest.approx(masses.sum(), abs=1e-15)
    # the swap: psi2 full at t = 0, psi3 full at t = 3.2
    assert float(rows[0][2]) == pytest.approx(1.0, abs=1e-5)
    assert float(rows[0][3]) == 0.0
    assert float(rows[-1][2]) == 0.0
    assert float(rows[-1][3]) == pytest.approx(1.0, abs=1e-5)


def test_scatter_deterministic_and_thread_invariant(tmp_path, monkeypatch):
    outs = []
    for name, threads in (("a", None), ("b", None), ("c", "4")):
        if threads is None:
            monkeypatch.delenv("MTDIRAC_THREADS", raising=False)
        else:
            monkeypatch.setenv("MTDIRAC_THREADS", threads)
        out = tmp_path / name
        rc = main(
            [
                "scatter",
                "--scenario",
                PACKET_CFG,
                "--out",
                str(out),
                "--times",
                "0:2:3",
                "--panels",
                "24",
                "--grid",
                "64",
            ]
        )
        assert rc == 0
        outs.append(_read(out / "scatter.csv"))
    assert outs[0] == outs[1] == outs[2]


def test_usage_errors_exit_2(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["verify", "--scenario", "no_such_file.json", "--out", str(out)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["verify", "--scenario", str(bad), "--out", str(out)]) == 2
    assert (
        main(
            [
                "scatter",
                "--scenario",
                PACKET_CFG,
                "--out",
                str(out),
                "--times",
                "0;1;2",
            ]
        )
        == 2
    )
    pts = tmp_path / "pts.csv"
    pts.write_text("a,b\n1,2\n")
    assert (
        main(
            [
                "evaluate",
                "--scenario",
                PACKET_CFG,
                "--out",
                str(out),
                "--points",
                str(pts),
            ]
        )
        == 2
    )
    err = capsys.readouterr().err
    assert "error:" in err


def test_scatter_rejects_zero_scenario(tmp_path):
    cfg = tmp_path / "zero.json"
    cfg.write_text("{}\n")
    assert (
        main(["scatter", "--scenario", str(cfg), "--out", str(tmp_path / "o")]) == 2
    )
