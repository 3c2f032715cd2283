import json
import math
import os
import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest

import difftrio

CLI = os.environ.get("DIFFTRIO_CLI") or shutil.which("difftrio")


def config_text(**overrides):
    cfg = {
        "schema_version": 1,
        "case": "heat",
        "solvers": [{"type": "rc", "r": 3}, {"type": "fdm", "cells": 20}],
        "output": {"x_cells": 20, "plots": False, "timing_min_seconds": 0},
        "reference": {"spectral_n": 16, "fdm_cells": 400, "spectral_tol": 1e-10, "fdm_tol": 1e-8},
        "jobs": 1,
    }
    cfg.update(overrides)
    return json.dumps(cfg)


def test_chebyshev_basics():
    assert difftrio.cheb_eval(np.array([1.0, 2.0, 3.0]), 0.5) == pytest.approx(0.5)
    assert difftrio.cheb_eval(np.array([0.0, 0.0, 1.0]), 1.0) == pytest.approx(1.0)
    d = difftrio.derivative_coeffs_first(np.array([0.0, 0.0, 1.0]))
    assert np.allclose(d[:2], [0.0, 4.0])


def test_cfl_bound():
    assert difftrio.cfl_max_step(1.0, 0.1) == pytest.approx(0.005)


def test_synthetic_climate_is_seeded():
    a = difftrio.synth_annual_bc(3)
    b = difftrio.synth_annual_bc(3)
    c = difftrio.synth_annual_bc(4)
    assert len(a["time_s"]) == 8760
    assert a["right"] == b["right"]
    assert a["right"] != c["right"]


def test_synth_round_trip(tmp_path):
    path = tmp_path / "bc.csv"
    difftrio.write_synth_bc(5, path)
    back = difftrio.read_bc_csv(path)
    assert back["left"] == difftrio.synth_annual_bc(5)["left"]


def test_empty_solver_list_rejected():
    with pytest.raises(difftrio.ConfigurationError):
        difftrio.parse_config(config_text(solvers=[]))


def test_preset_solvers():
    assert difftrio.preset("heat").solvers == ["R2C", "R3C", "R100C", "FDM", "Spectral"]
    with pytest.raises(difftrio.ConfigurationError):
        difftrio.preset("steam")


def test_run_case_small():
    report = difftrio.run_case(difftrio.parse_config(config_text()))
    assert report.exit_code == 0
    rows = {r["solver"]: r for r in report.rows}
    assert rows["FDM"]["field_eps_inf"] < rows["R3C"]["field_eps_inf"]
    assert report.certificate["certified"]
    field = report.field(1)
    assert field["values"].shape == (len(field["t_s"]), len(field["x_m"]))
    assert math.isclose(field["x_m"][-1], 0.1)


@pytest.mark.skipif(CLI is None, reason="difftrio executable not available")
class TestCli:
    def run(self, *args):
        return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)

    def test_no_verb(self):
        assert self.run().returncode == 1

    def test_synth_bc(self, tmp_path):
        out = tmp_path / "bc.csv"
        res = self.run("synth-bc", "--seed", 2, "--out", out)
        assert res.returncode == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "time_s,left,right"
        assert len([l for l in lines if not l.startswith("#")]) == 8761

    def test_empty_solvers_exit_1(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(config_text(solvers=[]))
        assert self.run("run", cfg).returncode == 1

    def test_run_exit_0(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(config_text(output={"dir": "o", "x_cells": 20, "plots": False, "timing_min_seconds": 0}))
        res = self.run("run", cfg)
        assert res.returncode == 0, res.stderr
        assert res.stdout.startswith("solver,field_eps_inf,flux_eps_inf,scd,r_cpu_ms_per_h,status")
        assert (tmp_path / "o" / "metrics.csv").exists()

    def test_sweep_rejects_descending(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(config_text())
        assert self.run("sweep", cfg, "--r", "5,3").returncode == 1
