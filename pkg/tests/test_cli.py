# this_file: tests/test_cli.py
"""Tests for the CLI interface."""

import json
from unittest.mock import patch

import numpy as np
import pytest
from scipy import ndimage

from qsmkit import api
from qsmkit.cli import main, run_subcommand
from qsmkit.core.constants import UnitTag
from qsmkit.volume.files import read_volume, write_volume
from qsmkit.volume.volume import Mask, Volume3D


def _summary(capsys):
    """Last JSON line printed on stdout."""
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


@pytest.fixture
def smooth_volume(tmp_path, rng):
    data = ndimage.gaussian_filter(rng.standard_normal((16, 16, 16)), 1.5, mode="wrap")
    return write_volume(Volume3D(data, unit=UnitTag.PPM), tmp_path / "chi.qsmv")


@pytest.fixture
def full_mask(tmp_path):
    return write_volume(Mask.full((16, 16, 16)).as_volume(), tmp_path / "mask.qsmv")


class TestRunSubcommand:
    """Exit codes and JSON summaries of run_subcommand."""

    @pytest.mark.parametrize("argv", [[], ["frobnicate"], ["--verbose"]])
    def test_usage_errors(self, argv, capsys):
        assert run_subcommand(argv) == 1
        assert "usage: qsmkit" in capsys.readouterr().err

    def test_phantom(self, tmp_path, capsys):
        assert run_subcommand(["phantom", "--out_dir", str(tmp_path), "--save_spec"]) == 0
        summary = _summary(capsys)
        assert summary["command"] == "phantom"
        assert summary["dims"] == [64, 64, 64]
        for name in (api.CHI, api.BRAIN_MASK, api.LABELS, "phantom_spec.json"):
            assert (tmp_path / name).exists()
        assert read_volume(tmp_path / api.CHI).unit is UnitTag.PPM

    def test_missing_input_file(self, tmp_path, capsys):
        assert run_subcommand(["forward", str(tmp_path / "nope.qsmv"), "--out", str(tmp_path / "f.qsmv")]) == 2
        assert "FileNotFoundError" in capsys.readouterr().err

    def test_bad_magic(self, tmp_path, capsys):
        bad = tmp_path / "bad.qsmv"
        bad.write_bytes(b"NOPE" + bytes(64))
        assert run_subcommand(["forward", str(bad), "--out", str(tmp_path / "f.qsmv")]) == 2
        assert "BadMagicError" in capsys.readouterr().err

    def test_volume_below_metric_window(self, tmp_path, rng, capsys):
        dims = (8, 8, 8)
        chi = write_volume(Volume3D(rng.standard_normal(dims), unit=UnitTag.PPM), tmp_path / "chi.qsmv")
        mask = write_volume(Mask.full(dims).as_volume(), tmp_path / "mask.qsmv")
        assert run_subcommand(["evaluate", str(chi), str(chi), str(mask), "--out", str(tmp_path / "m.csv")]) == 2
        assert "ShapeError" in capsys.readouterr().err

    def test_thin_mask_is_numerical_failure(self, tmp_path, capsys):
        psi = write_volume(Volume3D(np.zeros((16, 16, 16)), unit=UnitTag.PPM), tmp_path / "psi.qsmv")
        bits = np.zeros((16, 16, 16), dtype=bool)
        bits[:, :, 7:9] = True
        mask = write_volume(Mask(bits).as_volume(), tmp_path / "mask.qsmv")
        assert run_subcommand(["bgremove", str(psi), str(mask), "--out_dir", str(tmp_path)]) == 3
        assert "ThinMaskError" in capsys.readouterr().err

    def test_stochastic_commands_need_a_seed(self, tmp_path, capsys):
        assert run_subcommand(["pipeline", "--out_dir", str(tmp_path)]) == 1
        assert "ConfigError" in capsys.readouterr().err

    def test_invalid_option_value(self, smooth_volume, capsys):
        assert run_subcommand(["invert", str(smooth_volume), "--tkd_threshold", "0.9"]) == 1
        assert "ConfigError" in capsys.readouterr().err

    def test_forward(self, smooth_volume, tmp_path, capsys):
        out = tmp_path / "field.qsmv"
        assert run_subcommand(["forward", str(smooth_volume), "--out", str(out)]) == 0
        assert _summary(capsys)["command"] == "forward"
        assert read_volume(out).dims == (16, 16, 16)

    def test_evaluate_identical(self, smooth_volume, full_mask, tmp_path, capsys):
        out = tmp_path / "metrics.csv"
        argv = ["evaluate", str(smooth_volume), str(smooth_volume), str(full_mask), "--out", str(out)]
        assert run_subcommand(argv) == 0
        summary = _summary(capsys)
        assert summary["rmse_pct"] == 0.0
        assert summary["ssim"] == pytest.approx(1.0, abs=1e-9)
        assert out.exists()

    def test_invert_cg_options(self, smooth_volume, full_mask, tmp_path, capsys):
        out = tmp_path / "cg.qsmv"
        argv = [
            "invert", str(smooth_volume), "--method", "cg", "--mask", str(full_mask),
            "--lambda", "0.1", "--max_iters", "5", "--out", str(out),
        ]  # fmt: skip
        assert run_subcommand(argv) == 0
        assert _summary(capsys)["method"] == api.CG_METHOD
        assert out.exists()

    def test_invert_unknown_option(self, smooth_volume, capsys):
        assert run_subcommand(["invert", str(smooth_volume), "--gamma", "1"]) == 1

    def test_slices(self, smooth_volume, tmp_path, capsys):
        argv = ["slices", str(smooth_volume), "--axis", "y", "--out_dir", str(tmp_path / "png")]
        assert run_subcommand(argv) == 0
        outputs = _summary(capsys)["outputs"]
        assert outputs == [str(tmp_path / "png" / "chi_y008.png")]

    def test_echoes_with_noise_need_seed(self, smooth_volume, tmp_path):
        assert run_subcommand(["echoes", str(smooth_volume), "--snr", "20", "--out_dir", str(tmp_path)]) == 1

    def test_echoes(self, smooth_volume, tmp_path, capsys):
        argv = ["echoes", str(smooth_volume), "--snr", "20", "--seed", "4", "--out_dir", str(tmp_path)]
        assert run_subcommand(argv) == 0
        assert _summary(capsys)["n_echoes"] == 8
        assert (tmp_path / api.echo_names(7)[0]).exists()


class TestMain:
    """Tests for main."""

    @patch("qsmkit.cli.run_subcommand", return_value=3)
    def test_returns_exit_code(self, mock_run):
        assert main() == 3
        mock_run.assert_called_once_with()
