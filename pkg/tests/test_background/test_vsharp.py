# this_file: tests/test_background/test_vsharp.py
"""Tests for SMV kernels and V-SHARP background removal."""

import numpy as np
import pytest

from qsmkit.core.config import SmvConfig
from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import KernelError, ThinMaskError
from qsmkit.background.vsharp import smv_kernel, vsharp_remove
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import convolve_array
from qsmkit.volume.morphology import erode_mask
from qsmkit.volume.volume import Mask, Volume3D


def _coords(n=32):
    x, y, z = np.meshgrid(*(np.arange(n, dtype=float) - n // 2,) * 3, indexing="ij")
    return x, y, z


class TestSmvKernel:
    """Tests for smv_kernel."""

    @pytest.mark.parametrize("r", [0, 0.5])
    def test_small_radius_is_identity(self, r):
        np.testing.assert_allclose(smv_kernel(r, KGrid((8, 8, 8))).values, 1.0)

    def test_dc_gain(self):
        assert smv_kernel(3, KGrid((16, 16, 16))).values[0, 0, 0] == pytest.approx(1.0)

    def test_preserves_ramp_away_from_the_seam(self):
        r, n = 3, 32
        ramp = np.arange(n, dtype=float)[:, None, None] * np.ones((n, n, n))
        out = convolve_array(ramp, smv_kernel(r, KGrid((n, n, n))))
        np.testing.assert_allclose(out[r : n - r], ramp[r : n - r], atol=1e-8)

    @pytest.mark.parametrize("r", [-1, 9])
    def test_radius_out_of_range(self, r):
        with pytest.raises(KernelError):
            smv_kernel(r, KGrid((16, 16, 16)))


class TestVsharpRemove:
    """Tests for vsharp_remove."""

    def test_zero_field(self, make_ball):
        local, reliable = vsharp_remove(Volume3D.zeros((32, 32, 32)), make_ball((32, 32, 32), 12))
        assert not local.data.any()
        assert local.unit is UnitTag.PPM
        assert reliable.count > 0

    @pytest.mark.parametrize(
        "harmonic",
        [
            lambda x, y, z: x,
            lambda x, y, z: x * y,
            lambda x, y, z: x**2 - y**2,
            lambda x, y, z: 2 * z**2 - x**2 - y**2,
            lambda x, y, z: 0.3 * y - 0.02 * y * z,
        ],
    )
    def test_removes_harmonic_fields(self, make_ball, harmonic):
        mask = make_ball((32, 32, 32), 12)
        field = Volume3D(harmonic(*_coords()))
        local, reliable = vsharp_remove(field, mask)
        rms_field = np.sqrt(np.mean(field.data[mask.bits] ** 2))
        rms_local = np.sqrt(np.mean(local.data[reliable.bits] ** 2))
        assert rms_local < 0.05 * rms_field

    def test_reliable_mask(self, make_ball):
        mask = make_ball((32, 32, 32), 12)
        field = Volume3D(_coords()[0])
        _, reliable = vsharp_remove(field, mask, SmvConfig(r_min=2, r_max=10))
        np.testing.assert_array_equal(reliable.bits, erode_mask(mask, 2).bits)
        _, wider = vsharp_remove(field, mask, SmvConfig(r_min=1, r_max=10))
        assert reliable.issubset(wider)
        assert wider.count > reliable.count
        assert wider.issubset(mask)

    def test_zero_outside_reliable(self, make_ball, rng):
        mask = make_ball((32, 32, 32), 12)
        local, reliable = vsharp_remove(Volume3D(rng.standard_normal((32, 32, 32))), mask, SmvConfig(r_max=6))
        assert not local.data[~reliable.bits].any()

    def test_linear(self, make_ball, rng):
        mask = make_ball((32, 32, 32), 12)
        cfg = SmvConfig(r_max=8)
        f, g = (Volume3D(x) for x in rng.standard_normal((2, 32, 32, 32)))
        combined, _ = vsharp_remove(Volume3D(2 * f.data - g.data), mask, cfg)
        expected = 2 * vsharp_remove(f, mask, cfg)[0].data - vsharp_remove(g, mask, cfg)[0].data
        np.testing.assert_allclose(combined.data, expected, atol=1e-10)

    def test_thin_mask(self):
        bits = np.zeros((16, 16, 16), dtype=bool)
        bits[:, :, 7:9] = True
        with pytest.raises(ThinMaskError):
            vsharp_remove(Volume3D.zeros((16, 16, 16)), Mask(bits))
