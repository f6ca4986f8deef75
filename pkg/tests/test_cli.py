import json
import subprocess
import sys

import pytest

from gaudinlab.cli import (
    ConfigError,
    cmd_schubert,
    cmd_spectrum,
    cmd_verify,
    load_config,
)


E1_CONFIG = {"m": [1, 1], "l": 1, "z": ["0", "1"], "mode": "exact", "seed": 0}


class TestConfig:
    def test_duplicate_z_rejected(self):
        with pytest.raises(ConfigError):
            load_config({"m": [1, 1], "l": 1, "z": ["0", "0"]})

    def test_schema_violation(self):
        with pytest.raises(ConfigError):
            load_config({"m": [1, 1], "l": -1, "z": ["0", "1"]})
        with pytest.raises(ConfigError):
            load_config({"m": [1, 1], "z": ["0", "1"]})

    def test_exact_mode_needs_rational_z(self):
        with pytest.raises(ConfigError):
            load_config({"m": [1, 1], "l": 1, "z": [0.25, 1.1], "mode": "exact"})

    def test_tolerance_override(self, monkeypatch):
        monkeypatch.setenv("GAUDINLAB_TOL_RESIDUAL", "1e-5")
        _, _, _, tol = load_config(E1_CONFIG)
        assert tol.residual == 1e-5


class TestSpectrumCommand:
    def test_E1_golden(self):
        rep, fails = cmd_spectrum(E1_CONFIG)
        assert fails == []
        assert rep["dims"] == {"weight_space": 2, "sing_m": 1, "sing_l": 1,
                               "schubert": 1, "bethe_algebra_sing_m": 1,
                               "bethe_algebra_sing_l": 1, "annihilator": 1}
        (pt,) = rep["spectrum_sing_l"]["points"]
        assert pt["h"] == [[-2.0, 0.0], [2.0, 0.0]]
        assert pt["a"] == [[-0.5, -0.0]]
        (bv,) = rep["bethe_vectors"]
        assert bv["bethe_roots"] == [[0.5, 0.0]]
        assert all(v == 0.0 for v in rep["global_checks"].values())

    def test_E2_two_points(self):
        rep, fails = cmd_spectrum(
            {"m": [1, 1, 1], "l": 1, "z": ["0", "1", "2"], "seed": 0})
        assert fails == []
        assert len(rep["spectrum_sing_l"]["points"]) == 2
        assert rep["spectrum_sing_l"]["all_simple"] is True

    def test_exact_report_deterministic(self):
        rep1, _ = cmd_spectrum(E1_CONFIG)
        rep2, _ = cmd_spectrum(E1_CONFIG)
        for r in (rep1, rep2):
            r.pop("timing")     # wall time is the one nondeterministic field
        assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)

    def test_reports_validate_against_shipped_schema(self):
        import jsonschema
        from pathlib import Path
        schema = json.loads((Path(__file__).parent.parent / "docs"
                             / "report_schema.json").read_text())
        for cfg in (E1_CONFIG,
                    {"m": [1, 3], "l": 2, "z": ["0", "1"], "seed": 0},
                    {"m": [2, 2], "l": 2, "z": [0.3, -1.7], "mode": "float",
                     "seed": 9}):
            rep, _ = cmd_spectrum(cfg)
            jsonschema.validate(json.loads(json.dumps(rep)), schema)

    def test_shipped_config_schema_in_sync(self):
        from pathlib import Path
        from gaudinlab.cli import CONFIG_SCHEMA
        shipped = json.loads((Path(__file__).parent.parent / "docs"
                              / "config_schema.json").read_text())
        assert shipped == CONFIG_SCHEMA


class TestSchubertCommand:
    def test_values(self):
        assert cmd_schubert([1, 1], 1) == 1
        assert cmd_schubert([1, 1, 1, 1], 2) == 2
        assert cmd_schubert([1, 2], 2) == 0


class TestVerifyCommand:
    def test_E1_family(self):
        rep, fails = cmd_verify(E1_CONFIG, 3)
        assert fails == []
        assert rep["counts_constant"]
        assert [s["totals"]["sing_l"] for s in rep["samples"]] == [1, 1, 1]

    def test_three_spins(self):
        rep, fails = cmd_verify(
            {"m": [1, 1, 1], "l": 1, "z": ["0", "1", "2"], "seed": 5}, 3)
        assert fails == []
        assert [s["totals"]["sing_l"] for s in rep["samples"]] == [2, 2, 2]
        for s in rep["samples"]:
            if s["kind"] == "real":
                assert s["diagonalizable"] and s["all_simple"]

    def test_zero_samples_rejected(self):
        with pytest.raises(ConfigError):
            cmd_verify(E1_CONFIG, 0)


class TestMainEntry:
    def run_cli(self, *args, config=None, tmp_path=None):
        argv = [sys.executable, "-m", "gaudinlab.cli", *args]
        if config is not None:
            path = tmp_path / "config.json"
            path.write_text(json.dumps(config))
            argv += ["--config", str(path)]
        return subprocess.run(argv, capture_output=True, text=True)

    def test_schubert_cli(self):
        out = self.run_cli("schubert", "--m", "1,1,1,1", "--l", "2")
        assert out.returncode == 0 and out.stdout.strip() == "2"

    def test_spectrum_cli_roundtrip(self, tmp_path):
        out = self.run_cli("spectrum", config=E1_CONFIG, tmp_path=tmp_path)
        assert out.returncode == 0
        rep = json.loads(out.stdout)
        assert rep["failures"] == []

    def test_config_error_exit_code(self, tmp_path):
        out = self.run_cli("spectrum", config={"m": [1, 1], "l": 1,
                                               "z": ["0", "0"]},
                           tmp_path=tmp_path)
        assert out.returncode == 2
        assert "config error" in out.stderr

    def test_out_file(self, tmp_path):
        path = tmp_path / "report.json"
        out = self.run_cli("spectrum", "--out", str(path), config=E1_CONFIG,
                           tmp_path=tmp_path)
        assert out.returncode == 0
        assert json.loads(path.read_text())["failures"] == []

    def test_failed_gates_exit_1_and_list_names(self, tmp_path):
        # an impossible residual gate forces float-lane checks to fail
        import os
        argv = [sys.executable, "-m", "gaudinlab.cli", "spectrum"]
        path = tmp_path / "config.json"
        path.write_text(json.dumps(
            {"m": [1, 1, 1], "l": 1, "z": [0.0, 1.37, 2.91],
             "mode": "float", "seed": 0}))
        env = dict(os.environ, GAUDINLAB_TOL_RESIDUAL="1e-30")
        out = subprocess.run(argv + ["--config", str(path)],
                             capture_output=True, text=True, env=env)
        assert out.returncode == 1
        assert "failed checks:" in out.stderr
