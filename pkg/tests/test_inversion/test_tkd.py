# this_file: tests/test_inversion/test_tkd.py
"""Tests for truncated k-space division."""

import numpy as np
import pytest
from pydantic import ValidationError

from qsmkit.api import tkd_passband_error
from qsmkit.core.config import TkdConfig
from qsmkit.core.constants import UnitTag
from qsmkit.inversion.tkd import invert_tkd, tkd_multiplier
from qsmkit.phantom.signal import forward_field
from qsmkit.spectral.kernels import KSpaceKernel
from qsmkit.volume.volume import Volume3D


class TestTkdMultiplier:
    """Tests for tkd_multiplier."""

    def _kernel(self):
        return KSpaceKernel(np.array([0.5, 0.1, -0.1, 0.0, -0.5]).reshape(5, 1, 1))

    def test_passband_and_clamp(self):
        out = tkd_multiplier(self._kernel(), TkdConfig(threshold=0.2)).values.ravel()
        np.testing.assert_allclose(out, [2.0, 5.0, -5.0, 0.0, -2.0])

    def test_zero_subthreshold(self):
        out = tkd_multiplier(self._kernel(), TkdConfig(threshold=0.2, zero_subthreshold=True)).values.ravel()
        np.testing.assert_allclose(out, [2.0, 0.0, 0.0, 0.0, -2.0])

    def test_attenuated_bin(self):
        # D = 0.1 with t = 0.2 keeps half of the true value
        multiplier = tkd_multiplier(self._kernel(), TkdConfig(threshold=0.2)).values.ravel()
        assert 0.1 * multiplier[1] == pytest.approx(0.5)
        assert 0.5 * multiplier[0] == pytest.approx(1.0)

    @pytest.mark.parametrize("t", [0.0, 2 / 3, 1.0, -0.1])
    def test_threshold_range(self, t):
        with pytest.raises(ValidationError):
            TkdConfig(threshold=t)


class TestInvertTkd:
    """Tests for invert_tkd."""

    @pytest.mark.parametrize("t", [0.1, 0.2, 0.3, 0.5])
    def test_passband_is_exact(self, rng, t):
        chi = Volume3D(rng.standard_normal((32, 32, 32)), unit=UnitTag.PPM)
        cfg = TkdConfig(threshold=t)
        chi_hat = invert_tkd(forward_field(chi), cfg)
        assert tkd_passband_error(chi_hat, chi, cfg) <= 1e-10
        assert chi_hat.unit is UnitTag.PPM

    def test_zero_field(self):
        assert not invert_tkd(Volume3D.zeros((8, 8, 8))).data.any()

    def test_linear(self, rng):
        f, g = (Volume3D(x) for x in rng.standard_normal((2, 16, 16, 16)))
        combined = invert_tkd(Volume3D(3 * f.data + g.data)).data
        np.testing.assert_allclose(combined, 3 * invert_tkd(f).data + invert_tkd(g).data, atol=1e-12)
