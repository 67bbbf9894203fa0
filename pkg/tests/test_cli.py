import json
import math
import subprocess
import sys

import pytest

from prdsu.cli import UsageError, main, parse_axis, parse_number, read_config
from prdsu.sweep import Grid


def test_parse_number():
    assert parse_number("-pi/8") == -math.pi / 8
    assert parse_number("2*pi") == 2 * math.pi
    assert parse_number(" 0.75 ") == 0.75
    assert parse_number("1e-3") == 1e-3
    for bad in ("__import__('os')", "pi()", "x", "1/0", "", "inf"):
        with pytest.raises(UsageError):
            parse_number(bad)


def test_parse_axis():
    assert parse_axis("0.5") == 0.5
    g = parse_axis("-pi:pi:201")
    assert isinstance(g, Grid) and g.count == 201 and g.start == -math.pi
    for bad in ("0:1", "0:1:x", "0:1:0", "0:1:2:3"):
        with pytest.raises(UsageError):
            parse_axis(bad)


def test_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\ng = 1.2\n\nT = 0.8  # trailing\ntheta = -pi/8\n")
    assert read_config(p) == {"g": "1.2", "T": "0.8", "theta": "-pi/8"}
    p.write_text("colour = blue\n")
    with pytest.raises(UsageError):
        read_config(p)
    p.write_text("g 1.2\n")
    with pytest.raises(UsageError):
        read_config(p)


def test_eval_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("g = 1.0\nT = 0.5\n")
    assert main(["eval", "--config", str(cfg), "--T", "0.6", "--theta=-pi/8"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["parameters"]["T"] == 0.6 and out["parameters"]["g"] == 1.0
    assert out["stable"] is True
    assert set(out) >= {"n_total", "snl", "qcrb_pr", "lambda", "gamma_sid", "sigma_hd"}


def test_eval_sentinels_are_strings(capsys):
    assert main(["eval", "--gamma", "0", "--T", "0.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["dphi_pr_hd"] == "inf" and out["gamma_hd"] == "nan"


def test_eval_rejects_grid(capsys):
    assert main(["eval", "--phi", "0:1:3"]) == 1


def test_sweep_to_file(tmp_path, capsys):
    out = tmp_path / "s.csv"
    rc = main(["sweep", "--theta=-pi/8", "--phi=-0.2:0.2:5", "--verify", "1", "--jobs", "1",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6 and lines[0].startswith("theta,phi,T,g,r,gamma")
    manifest = json.loads((tmp_path / "s.csv.json").read_text())
    assert manifest["grids"]["phi"]["count"] == 5 and 0 < manifest["unstable_fraction"] < 1
    assert "max_residual" in capsys.readouterr().err


def test_sweep_to_stdout(capsys):
    assert main(["sweep", "--phi", "0:0.1:2", "--scheme", "sid", "--model", "pr", "--jobs", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and "dphi_pr_sid" in lines[0] and "dphi_pr_hd" not in lines[0]


@pytest.mark.parametrize("argv", [
    ["sweep", "--T", "0:2:3"],
    ["sweep", "--scheme", "parity"],
    ["sweep", "--jobs", "many"],
    ["eval", "--g", "-1"],
    ["eval", "--trials", "0"],
    ["frobnicate"],
    [],
])
def test_validation_exit_code(argv, capsys):
    assert main(argv) == 1


def test_io_exit_code(tmp_path, capsys):
    assert main(["sweep", "--out", str(tmp_path / "missing" / "x.csv")]) == 2
    assert main(["eval", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_figure_command(tmp_path, capsys):
    assert main(["figure", "fig9", "--out", str(tmp_path), "--jobs", "1"]) == 0
    assert (tmp_path / "fig9_manifest.json").exists()
    assert main(["figure", "fig12", "--out", str(tmp_path)]) == 1


def test_verify_command(tmp_path, capsys):
    rc = main(["verify", "--samples", "6", "--fock-points", "1", "--out", str(tmp_path / "v.json")])
    report = json.loads((tmp_path / "v.json").read_text())
    assert rc == (0 if report["passed"] else 3)
    assert report["passed"]
    assert "printed_sid_variance_vs_chain_max_rel" in report["findings"]


def test_identities_command(capsys):
    assert main(["identities", "--samples", "200"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"]
    # an impossible tolerance must report a verification failure
    assert main(["identities", "--samples", "200", "--tol", "0"]) == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "prdsu", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
