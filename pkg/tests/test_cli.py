import json

import numpy as np
import pytest

from hypdenoise import synthdata
from hypdenoise.cli import EXIT_CONFIG, EXIT_NOCONV, EXIT_OK, main
from hypdenoise.config import ConfigError, parse_config
from hypdenoise.imageio import read_pgm16, write_pgm16
from hypdenoise.noise import make_rng


def run_h1(out, extra=()):
    args = [
        "synthetic-h1", "--n", "24", "--max-iter", "400", "--tol", "1e-9",
        "--seed", "3", "--out", str(out),
    ]
    return main(args + list(extra))


class TestConfig:
    def test_defaults_per_kind(self):
        cfg = parse_config("synthetic-h1")
        assert cfg.n == 400 and cfg.sigma == 0.6 and cfg.lam == 6.0
        assert cfg.noise_kind == "tangential"
        cfg2 = parse_config("synthetic-h2")
        assert cfg2.sigma == 0.3 and cfg2.lam == 5.0 and cfg2.mu == 0.1
        cfg3 = parse_config("gaussian-image")
        assert cfg3.k_shots == 20 and cfg3.rho_tikhonov == 10.0

    def test_unknown_file_key_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"lambda_reg": 2.0}))
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config("synthetic-h1", str(path))

    def test_kind_conflict_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"kind": "synthetic-h2"}))
        with pytest.raises(ConfigError, match="conflicts"):
            parse_config("synthetic-h1", str(path))

    def test_flag_overrides_file_and_records(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"lam": 2.0, "sigma": 0.4}))
        cfg = parse_config("synthetic-h1", str(path), {"lam": 3.0})
        assert cfg.lam == 3.0 and cfg.sigma == 0.4
        assert cfg.overrides == {"lam": {"replaced": 2.0, "with": 3.0}}

    def test_malformed_json_reports_position(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"lam": }')
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("synthetic-h1", str(path))

    def test_validation(self):
        with pytest.raises(ConfigError):
            parse_config("synthetic-h1", None, {"lam": -1.0})
        with pytest.raises(ConfigError):
            parse_config("synthetic-h1", None, {"model": "wiener"})


class TestCliRuns:
    def test_h1_smoke_outputs(self, tmp_path):
        code = run_h1(tmp_path / "a")
        assert code == EXIT_OK
        out = tmp_path / "a"
        for name in (
            "signal.csv", "metrics.txt", "config_echo.json",
            "convergence_tikhonov.csv", "convergence_tv.csv",
        ):
            assert (out / name).exists()
        echo = json.loads((out / "config_echo.json").read_text())
        assert echo["n"] == 24 and echo["kind"] == "synthetic-h1"

    def test_determinism_byte_identical(self, tmp_path):
        run_h1(tmp_path / "a")
        run_h1(tmp_path / "b")
        for name in ("signal.csv", "metrics.txt", "convergence_tv.csv"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b

    def test_unknown_config_key_exit_code(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"bogus": 1}))
        code = main(["synthetic-h1", "--config", str(path), "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert "unknown config key" in capsys.readouterr().err

    def test_mae_gate_failure_exit_code(self, tmp_path):
        # starving the solver of iterations trips the gate
        code = main([
            "synthetic-h1", "--n", "24", "--max-iter", "2", "--seed", "3",
            "--model", "tikhonov", "--out", str(tmp_path / "f"),
        ])
        assert code == EXIT_NOCONV
        text = (tmp_path / "f" / "metrics.txt").read_text()
        assert "tikhonov.failed = 1" in text
        assert "tikhonov_" not in (tmp_path / "f" / "signal.csv").read_text()

    def test_h2_smoke(self, tmp_path):
        code = main([
            "synthetic-h2", "--n", "20", "--max-iter", "400", "--tol", "1e-8",
            "--model", "tikhonov", "--out", str(tmp_path / "h2"),
        ])
        assert code == EXIT_OK
        header = (tmp_path / "h2" / "signal.csv").read_text().splitlines()[0]
        assert "true_x3" in header and "tikhonov_x3" in header

    def test_check_passes(self, capsys):
        assert main(["check"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 5
        assert all(line.startswith("PASS") for line in lines)

    def test_gaussian_image_smoke(self, tmp_path):
        code = main([
            "gaussian-image", "--rows", "8", "--cols", "8", "--k-shots", "6",
            "--max-iter", "2000", "--tol", "1e-7", "--model", "tv",
            "--seed", "1", "--out", str(tmp_path / "img"),
        ])
        assert code == EXIT_OK
        out = tmp_path / "img"
        assert (out / "denoised_mu_tv.pgm").exists()
        assert (out / "denoised_sigma_tv.pgm").exists()
        text = (out / "metrics.txt").read_text()
        assert "tv.snr_mu" in text


class TestImageio:
    def test_pgm16_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        arr = rng.uniform(0.0, 1.0, size=(9, 13))
        path = tmp_path / "x.pgm"
        write_pgm16(path, arr, lo=0.0, hi=1.0)
        back, maxval = read_pgm16(path)
        assert maxval == 65535
        assert back.shape == arr.shape
        assert np.max(np.abs(back - arr)) < 1e-4

    def test_pgm16_sidecar_records_range(self, tmp_path):
        arr = np.array([[-1.0, 2.0], [0.5, 0.5]])
        path = tmp_path / "c.pgm"
        write_pgm16(path, arr)
        sidecar = (tmp_path / "c.pgm.scale").read_text()
        assert "lo = -1" in sidecar and "hi = 2" in sidecar
        back, _ = read_pgm16(path)
        assert np.max(np.abs(-1.0 + 3.0 * back - arr)) < 1e-4

    def test_noisy_series_shape(self):
        img = synthdata.test_image(6, 5)
        series = synthdata.noisy_series(img, 4, 0.1, make_rng(0))
        assert series.shape == (4, 6, 5)
