# this_file: tests/test_core/test_config.py
"""Tests for configuration models and loading."""

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from qsmkit.core.config import (
    CgConfig,
    EchoTrain,
    IoConfig,
    PipelineConfig,
    SmvConfig,
    TkdConfig,
    UNetConfig,
    load_pipeline_config,
)
from qsmkit.core.constants import SkipMode
from qsmkit.core.exceptions import ConfigError


class TestEchoTrain:
    """Tests for EchoTrain."""

    def test_default_protocol(self):
        echoes = EchoTrain()
        assert echoes.n_echoes == 8
        assert echoes.tes[0] == pytest.approx(5.468e-3)
        assert echoes.tes[1] - echoes.tes[0] == pytest.approx(3.0e-3)
        assert echoes.sum_te == pytest.approx(8 * 5.468e-3 + 28 * 3.0e-3)
        assert echoes.b0 == 3.0

    @pytest.mark.parametrize("tes", [[], [0.01, 0.005], [0.0, 0.01], [0.01, 0.01]])
    def test_invalid_echo_times(self, tes):
        with pytest.raises(ValidationError):
            EchoTrain(tes=tes)

    def test_invalid_field(self):
        with pytest.raises(ValidationError):
            EchoTrain(b0=0.0)


class TestSolverConfigs:
    """Tests for the SMV, TKD, CG and U-net sections."""

    def test_defaults(self):
        assert (SmvConfig().r_min, SmvConfig().r_max, SmvConfig().truncation) == (1, 25, 0.05)
        assert TkdConfig().threshold == 0.2
        assert UNetConfig().widths == [8, 16, 32, 64]
        assert UNetConfig().skip_mode is SkipMode.CONCAT

    @pytest.mark.parametrize("kwargs", [{"r_min": 0}, {"r_min": 5, "r_max": 4}, {"truncation": 1.0}])
    def test_invalid_smv(self, kwargs):
        with pytest.raises(ValidationError):
            SmvConfig(**kwargs)

    @pytest.mark.parametrize("threshold", [0.0, 2 / 3, 1.0])
    def test_invalid_tkd(self, threshold):
        with pytest.raises(ValidationError):
            TkdConfig(threshold=threshold)

    def test_cg_lambda_alias(self):
        assert CgConfig.model_validate({"lambda": 0.5}).lam == 0.5
        assert CgConfig(lam=0.25).lam == 0.25
        with pytest.raises(ValidationError):
            CgConfig(lam=-1.0)

    @pytest.mark.parametrize("kwargs", [{"patch_size": 12}, {"depth": 0}, {"dropout_rate": 1.0}])
    def test_invalid_unet(self, kwargs):
        with pytest.raises(ValidationError):
            UNetConfig(**kwargs)


class TestPipelineConfig:
    """Tests for PipelineConfig and load_pipeline_config."""

    def test_seed_is_required(self):
        with pytest.raises(ValidationError):
            PipelineConfig()

    def test_default_model_path(self, tmp_path):
        assert PipelineConfig(seed=0).default_model_path.name == "unet.qsmn"
        cfg = PipelineConfig(seed=0, io=IoConfig(model_path=tmp_path / "m.qsmn"))
        assert cfg.default_model_path == tmp_path / "m.qsmn"

    def test_run_model_path(self, tmp_path):
        run = tmp_path / "run"
        assert PipelineConfig(seed=0).run_model_path(run) == run / "unet.qsmn"
        relative = PipelineConfig(seed=0, io=IoConfig(model_path=Path("nets/a.qsmn")))
        assert relative.run_model_path(run) == run / "nets" / "a.qsmn"
        absolute = PipelineConfig(seed=0, io=IoConfig(model_path=tmp_path / "b.qsmn"))
        assert absolute.run_model_path(run) == tmp_path / "b.qsmn"

    def test_missing_phantom_spec(self, tmp_path):
        with pytest.raises(ValidationError):
            PipelineConfig(seed=0, phantom_spec=tmp_path / "absent.json")

    def test_load_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"seed": 7, "snr": 40, "cg": {"lambda": 0.1}, "echoes": {"tes": [0.004, 0.008]}}))
        cfg = load_pipeline_config(path)
        assert cfg.seed == 7
        assert cfg.cg.lam == 0.1
        assert cfg.echoes.n_echoes == 2

    def test_load_round_trip(self, tmp_path):
        cfg = PipelineConfig(seed=3, snr=25.0)
        path = tmp_path / "config.json"
        path.write_text(cfg.model_dump_json(by_alias=True))
        assert load_pipeline_config(path) == cfg

    @pytest.mark.parametrize("text", ["{", '{"seed": 1, "mask_fraction": 2}', '{"snr": 10}'])
    def test_invalid_files(self, tmp_path, text):
        path = tmp_path / "config.json"
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_pipeline_config(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_pipeline_config(tmp_path / "absent.json")
