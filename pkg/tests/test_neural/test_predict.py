# this_file: tests/test_neural/test_predict.py
"""Tests for tiled whole-volume prediction."""

import numpy as np
import pytest

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import ShapeError
from qsmkit.neural.predict import blend_window, mask_for_display, predict_volume, tile_origins
from qsmkit.neural.unet import build_unet, forward
from qsmkit.preprocess.normalize import NormalizedPhase, Standardization
from qsmkit.volume.volume import Mask, Volume3D


class TestTiling:
    """Tests for tile_origins and blend_window."""

    @pytest.mark.parametrize(
        ("n", "p", "expected"),
        [(64, 32, [0, 16, 32]), (40, 32, [0, 8]), (32, 32, [0]), (20, 8, [0, 4, 8, 12])],
    )
    def test_origins(self, n, p, expected):
        assert tile_origins(n, p) == expected

    def test_axis_shorter_than_patch(self):
        with pytest.raises(ShapeError):
            tile_origins(31, 32)

    def test_half_shifted_windows_sum_to_one(self):
        idx = np.arange(16)
        w = np.cbrt(blend_window(16)[idx, idx, idx])
        np.testing.assert_allclose(w[:8] + w[8:], 1.0, rtol=1e-12)

    def test_window_positive(self):
        assert (blend_window(8) > 0).all()


class TestPredictVolume:
    """Tests for predict_volume."""

    def test_constant_model(self, tiny_unet_config, rng):
        model = build_unet(tiny_unet_config)
        model.head.params["weight"][:] = 0.0
        model.head.params["bias"][:] = 0.3
        model.stats = Standardization(0.0, 1.0)
        out = predict_volume(model, Volume3D(rng.standard_normal((24, 20, 16))))
        assert out.dims == (24, 20, 16)
        assert out.unit is UnitTag.PPM
        np.testing.assert_allclose(out.data, 0.3, atol=1e-12)

    def test_single_tile_matches_forward(self, tiny_unet_config, rng):
        model = build_unet(tiny_unet_config, seed=4)
        model.stats = Standardization(0.5, 2.0)
        data = rng.standard_normal((8, 8, 8))
        out = predict_volume(model, Volume3D(data))
        np.testing.assert_allclose(out.data, forward(model, (data - 0.5) / 2.0), rtol=1e-12, atol=1e-12)

    def test_accepts_normalized_phase(self, tiny_unet_config, rng):
        model = build_unet(tiny_unet_config)
        volume = Volume3D(rng.standard_normal((8, 8, 8)), unit=UnitTag.PPM)
        psi = NormalizedPhase(psi=volume, n_echoes=1, b0=3.0, sum_te=0.01)
        np.testing.assert_array_equal(predict_volume(model, psi).data, predict_volume(model, volume).data)

    def test_input_mask_hides_outside(self, tiny_unet_config, rng):
        model = build_unet(tiny_unet_config)
        model.stats = Standardization(0.0, 1.0)
        bits = np.zeros((16, 16, 16), dtype=bool)
        bits[4:12, 4:12, 4:12] = True
        a = rng.standard_normal((16, 16, 16))
        b = np.where(bits, a, rng.standard_normal((16, 16, 16)))
        mask = Mask(bits)
        np.testing.assert_array_equal(
            predict_volume(model, Volume3D(a), mask).data, predict_volume(model, Volume3D(b), mask).data
        )

    def test_volume_smaller_than_patch(self, tiny_unet_config):
        with pytest.raises(ShapeError):
            predict_volume(build_unet(tiny_unet_config), Volume3D(np.ones((4, 8, 8))))

    def test_mask_for_display(self, rng):
        bits = np.zeros((4, 4, 4), dtype=bool)
        bits[1:3] = True
        out = mask_for_display(Volume3D(rng.standard_normal((4, 4, 4)) + 5.0), Mask(bits))
        assert not out.data[0].any()
        assert (out.data[1:3] != 0).all()
