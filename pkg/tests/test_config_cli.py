import json
from pathlib import Path

import numpy as np
import pytest

from hsflow import cli
from hsflow import config as config_mod
from hsflow import snapshot as snap
from hsflow.errors import ValidationError

INI = """\
[lattice]
n = 8 4 4 4
L = 1 1 1 1

[initial]
generator = t3-invariant
amplitude = 0.05
seed = 7

[flow]
cfl = 0.2
max_steps = 12
diag_cadence = 4
fiber_samples = 2
seed = 1
checkpoint_cadence = 6

[output]
dir = {out}
"""


def test_ini_json_equivalent(tmp_path):
    cfg_ini = config_mod.loads(INI.format(out="runs/x"))
    cfg_json = config_mod.loads(cfg_ini.to_json())
    assert cfg_json == cfg_ini
    assert cfg_json.config_hash() == cfg_ini.config_hash()


def test_round_trip_stable():
    cfg = config_mod.loads(INI.format(out="runs/x"))
    again = config_mod.loads(config_mod.loads(cfg.to_json()).to_json())
    assert again == cfg


def test_defaults_applied():
    cfg = config_mod.loads("[lattice]\nn = 4 4 4 4\n")
    assert cfg.generator == "hyperkahler-standard"
    assert cfg.flow.cfl == 0.2
    assert cfg.flow.dt is None


def test_unknown_key_rejected():
    with pytest.raises(ValidationError, match="unknown key"):
        config_mod.loads("[lattice]\nn = 4 4 4 4\nnn = 3\n")


def test_unknown_section_rejected():
    with pytest.raises(ValidationError, match="unknown section"):
        config_mod.loads("[latice]\nn = 4 4 4 4\n")


def test_bad_value_rejected():
    with pytest.raises(ValidationError, match="bad value"):
        config_mod.loads("[flow]\nmax_steps = soon\n")


def test_hash_changes_with_content():
    a = config_mod.loads(INI.format(out="runs/x"))
    b = config_mod.loads(INI.format(out="runs/x").replace("0.05", "0.06"))
    assert a.config_hash() != b.config_hash()


def test_hash_ignores_output_dir():
    a = config_mod.loads(INI.format(out="runs/x"))
    b = config_mod.loads(INI.format(out="runs/elsewhere"))
    assert a.config_hash() == b.config_hash()


def test_schema_validates_json_form():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(
        (Path(__file__).parent.parent / "docs" / "config.schema.json").read_text())
    cfg = config_mod.loads(INI.format(out="runs/x"))
    jsonschema.validate(json.loads(cfg.to_json()), schema)


class TestCliFlow:
    def test_flow_lift_report(self, tmp_path, capsys):
        out = tmp_path / "run"
        cfg_path = tmp_path / "exp.ini"
        cfg_path.write_text(INI.format(out=out))
        assert cli.main(["flow", "--config", str(cfg_path)]) == 0
        assert (out / "config.json").exists()
        csv_text = (out / "diagnostics.csv").read_text()
        assert csv_text.startswith("# config_hash=")
        assert "step,time,dt,max_dw,min_eig_Q" in csv_text
        snaps = sorted(out.glob("snap_*.hsf"))
        assert [p.name for p in snaps] == ["snap_000006.hsf", "snap_000012.hsf"]
        sidecar = snap.read_sidecar(snaps[0])
        assert sidecar["step"] == 6
        assert sidecar["config_hash"] in csv_text

        capsys.readouterr()   # drain the flow command's output
        assert cli.main(["lift", "--snapshot", str(snaps[-1])]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["max_star7_residual"] <= 1e-9
        assert report["max_torsion_trace"] <= 1e-9

        assert cli.main(["report", "--run", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["max_dw_worst"] <= 1e-11
        assert summary["period_drift_worst"] <= 1e-11
        assert "q_dev_tail_monotone" in summary
        assert summary["q_dev_ratio"] < 1.0
        assert (out / "report.csv").read_text().startswith("time,q_dev")

    def test_missing_config_is_io_error(self, tmp_path):
        assert cli.main(["flow", "--config", str(tmp_path / "nope.ini")]) == 3

    def test_invalid_config_is_validation_error(self, tmp_path):
        p = tmp_path / "bad.ini"
        p.write_text("[flow]\nmax_steps = soon\n")
        assert cli.main(["flow", "--config", str(p)]) == 1

    def test_degeneration_exit_code(self, tmp_path):
        p = tmp_path / "exp.ini"
        p.write_text(INI.format(out=tmp_path / "r")
                     .replace("cfl = 0.2", "dt = 5.0")
                     .replace("max_steps = 12", "max_steps = 2"))
        assert cli.main(["flow", "--config", str(p)]) == 2

    def test_overlarge_amplitude_exit_code(self, tmp_path):
        p = tmp_path / "exp.ini"
        p.write_text(INI.format(out=tmp_path / "r").replace("0.05", "9.5"))
        assert cli.main(["flow", "--config", str(p)]) == 2


class TestCliVerify:
    def test_smoke_pass(self, tmp_path, capsys):
        assert cli.main(["verify", "--trials", "1", "--seed", "3"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True

    def test_report_file(self, tmp_path):
        out = tmp_path / "report.json"
        assert cli.main(["verify", "--trials", "2", "--seed", "3",
                         "--out", str(out)]) == 0
        assert json.loads(out.read_text())["passed"] is True
