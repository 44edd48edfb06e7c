import json
import math

import numpy as np
import pytest

from stepwell import ConfigError, GaussianPacket, InfiniteWell, Step
from stepwell.cli import (
    Scenario,
    main,
    parse_config_text,
    scenario_from_config,
)

WELL_CFG = """
# small infinite-well scenario, cheap to evolve
potential = well
d = 20
alpha = 1
x0 = 10
p0 = 30
method = mirror
times = 0.25, 0.5
x_min = 0
x_max = 20
dx = 0.02
dt = 1e-3
"""


class TestConfigParsing:
    def test_basic(self):
        cfg = parse_config_text("a = 1\n# comment\nb= two # trailing\n\n")
        assert cfg == {"a": "1", "b": "two"}

    def test_bad_line(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("a = 1\nnonsense\n")

    def test_scenario_round_trip(self):
        sc = scenario_from_config(parse_config_text(WELL_CFG))
        assert isinstance(sc.potential, InfiniteWell)
        assert sc.packet == GaussianPacket(1.0, 10.0, 30.0)
        assert sc.times == [0.25, 0.5]
        assert sc.method == "mirror"

    def test_missing_key(self):
        with pytest.raises(ConfigError, match="missing config key"):
            scenario_from_config({"potential": "well", "d": "20"})

    def test_bad_value(self):
        cfg = parse_config_text(WELL_CFG.replace("p0 = 30", "p0 = fast"))
        with pytest.raises(ConfigError, match="bad value"):
            scenario_from_config(cfg)

    def test_unknown_potential(self):
        with pytest.raises(ConfigError, match="unknown potential"):
            scenario_from_config({"potential": "ramp"})


class TestScenarioValidation:
    def test_method_potential_mismatch(self):
        with pytest.raises(ConfigError, match="incompatible"):
            Scenario(potential=Step(5.0), packet=GaussianPacket(1, -5, 5),
                     method="mirror", times=[0.1], x_min=-10, x_max=10,
                     dx=0.1, dt=0.01)

    def test_descending_times(self):
        with pytest.raises(ConfigError, match="ascending"):
            Scenario(potential=InfiniteWell(20.0), packet=GaussianPacket(1, 10, 30),
                     method="mirror", times=[0.5, 0.25], x_min=0, x_max=20,
                     dx=0.1, dt=0.01)


def _write_cfg(tmp_path, text=WELL_CFG, name="well.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestRunVerb:
    def test_run_outputs(self, tmp_path, monkeypatch):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "env_out"))
        cfg = _write_cfg(tmp_path)
        assert main(["run", cfg]) == 0
        outdir = tmp_path / "env_out" / "well"
        snaps = sorted(p.name for p in outdir.glob("snapshot_*.csv"))
        assert snaps == ["snapshot_000.csv", "snapshot_001.csv"]
        assert (outdir / "diagnostics.csv").exists()
        assert (outdir / "plot.gp").exists()
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert manifest["scenario"]["method"] == "mirror"
        assert manifest["scenario"]["p0"] == 30.0
        assert manifest["issues"] == []

    def test_out_flag_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "env_out"))
        cfg = _write_cfg(tmp_path)
        assert main(["run", cfg, "--out", str(tmp_path / "flag_out")]) == 0
        assert (tmp_path / "flag_out" / "well" / "snapshot_000.csv").exists()
        assert not (tmp_path / "env_out").exists()

    def test_csv_round_trips_doubles(self, tmp_path, monkeypatch):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        cfg = _write_cfg(tmp_path)
        main(["run", cfg])
        outdir = tmp_path / "o" / "well"
        rows = (outdir / "snapshot_001.csv").read_text().splitlines()
        assert rows[0] == "x,re,im,abs2"
        x, re, im, a2 = (float(v) for v in rows[40].split(","))
        assert a2 == re * re + im * im or abs(a2 - (re * re + im * im)) < 1e-30
        # recompute the field at this x and compare exactly at double precision
        from stepwell import mirror_well
        val = mirror_well(GaussianPacket(1.0, 10.0, 30.0), 20.0, 0.5,
                          np.array([x]))[0]
        assert re == pytest.approx(val.real, abs=1e-14)
        assert im == pytest.approx(val.imag, abs=1e-14)

    def test_set_override(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        cfg = _write_cfg(tmp_path)
        assert main(["run", cfg, "--set", "times=0.25"]) == 0
        outdir = tmp_path / "o" / "well"
        assert not (outdir / "snapshot_001.csv").exists()

    def test_missing_config_exits_2(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.cfg")]) == 2
        assert "config error" in capsys.readouterr().err

    def test_bad_config_exits_2(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        cfg = _write_cfg(tmp_path, WELL_CFG.replace("method = mirror",
                                                    "method = step_exact"))
        assert main(["run", cfg]) == 2

    def test_precondition_exits_4(self, tmp_path, monkeypatch, capsys):
        # step_approx at k0 barely above 1 violates the climb preconditions
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        text = """
potential = step
V = 40
alpha = 1
x0 = -10
p0 = 10
method = step_approx
times = 0.5
x_min = -30
x_max = 10
dx = 0.05
dt = 1e-3
"""
        cfg = _write_cfg(tmp_path, text, "bad.cfg")
        assert main(["run", cfg]) == 4
        err = capsys.readouterr().err
        assert "PreconditionViolation" in err


class TestCompareVerb:
    def test_mirror_vs_eigen(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        cfg = _write_cfg(tmp_path)
        assert main(["compare", cfg, "--a", "mirror", "--b", "oracle_eigen"]) == 0
        outdir = tmp_path / "o" / "well-mirror-vs-oracle_eigen"
        rows = (outdir / "differences.csv").read_text().splitlines()
        assert rows[0] == "t,l2,linf,d_mean_x,d_mean_p,d_norm"
        for row in rows[1:]:
            l2 = float(row.split(",")[1])
            assert l2 < 1e-8

    def test_incompatible_method_exits_2(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        cfg = _write_cfg(tmp_path)
        assert main(["compare", cfg, "--a", "mirror", "--b", "step_exact"]) == 2


class TestFigureVerb:
    def test_fig2_bundle(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("STEPWELL_OUTPUT_DIR", str(tmp_path / "o"))
        assert main(["figure", "fig2"]) == 0
        outdir = tmp_path / "o" / "fig2"
        for panel in ("panel_a.csv", "panel_b.csv", "panel_c.csv"):
            assert (outdir / panel).exists()
        out = capsys.readouterr().out
        # total reflection: essentially no transmitted mass by the last panel
        right = float(out.strip().splitlines()[2].split("right_mass=")[1])
        assert right < 1e-2
