# this_file: tests/test_neural/test_checkpoint.py
"""Tests for QSMN checkpoints."""

import struct

import numpy as np
import pytest

from qsmkit.core.exceptions import CheckpointError
from qsmkit.neural.checkpoint import load_checkpoint, save_checkpoint
from qsmkit.neural.unet import build_unet, forward
from qsmkit.preprocess.normalize import Standardization


@pytest.fixture
def trained_like(tiny_unet_config, rng):
    """A model whose running statistics and bookkeeping differ from a fresh build."""
    model = build_unet(tiny_unet_config, seed=8)
    forward(model, rng.standard_normal((2, 8, 8, 8)), training=True)
    model.stats = Standardization(0.01, 0.2)
    model.step = 42
    return model


class TestCheckpoint:
    """Tests for save_checkpoint and load_checkpoint."""

    def test_round_trip_is_bit_exact(self, trained_like, tmp_path, rng):
        path = save_checkpoint(trained_like, tmp_path / "models" / "m.qsmn")
        loaded = load_checkpoint(path)
        assert loaded.config == trained_like.config
        assert loaded.stats == trained_like.stats
        assert loaded.step == 42
        for tensors, original in ((loaded.parameters(), trained_like.parameters()), (loaded.buffers(), trained_like.buffers())):
            assert list(tensors) == list(original)
            assert all(np.array_equal(tensors[k], original[k]) for k in tensors)
        patch = rng.standard_normal((8, 8, 8))
        np.testing.assert_array_equal(forward(loaded, patch), forward(trained_like, patch))

    def test_model_without_stats(self, tiny_unet_config, tmp_path):
        loaded = load_checkpoint(save_checkpoint(build_unet(tiny_unet_config), tmp_path / "m.qsmn"))
        assert loaded.stats is None

    def test_bad_magic(self, trained_like, tmp_path):
        path = save_checkpoint(trained_like, tmp_path / "m.qsmn")
        path.write_bytes(b"XXXX" + path.read_bytes()[4:])
        with pytest.raises(CheckpointError, match="magic"):
            load_checkpoint(path)

    def test_unsupported_version(self, trained_like, tmp_path):
        path = save_checkpoint(trained_like, tmp_path / "m.qsmn")
        raw = path.read_bytes()
        path.write_bytes(raw[:4] + struct.pack("<H", 99) + raw[6:])
        with pytest.raises(CheckpointError, match="version"):
            load_checkpoint(path)

    @pytest.mark.parametrize("keep", [3, 100, -8])
    def test_truncated(self, trained_like, tmp_path, keep):
        path = save_checkpoint(trained_like, tmp_path / "m.qsmn")
        path.write_bytes(path.read_bytes()[:keep])
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_malformed_header(self, tmp_path):
        blob = b"not json"
        path = tmp_path / "m.qsmn"
        path.write_bytes(struct.pack("<4sHI", b"QSMN", 1, len(blob)) + blob)
        with pytest.raises(CheckpointError, match="header"):
            load_checkpoint(path)
