# this_file: tests/test_spectral/test_fft.py
"""Tests for the FFT conventions and frequency grids."""

import numpy as np
import pytest

from qsmkit.core.exceptions import KernelError
from qsmkit.spectral.fft import fft3, ifft3
from qsmkit.spectral.grid import KGrid


class TestFft3:
    """fft3 is unnormalized and ifft3 carries the 1/N."""

    def test_delta_has_flat_spectrum(self):
        delta = np.zeros((8, 8, 8))
        delta[0, 0, 0] = 1.0
        np.testing.assert_allclose(fft3(delta), np.ones((8, 8, 8)))

    def test_constant_maps_to_dc(self):
        spectrum = fft3(np.full((4, 6, 8), 2.5))
        assert spectrum[0, 0, 0] == pytest.approx(2.5 * 4 * 6 * 8)
        spectrum[0, 0, 0] = 0
        assert np.abs(spectrum).max() < 1e-10

    def test_parseval(self, rng):
        x = rng.standard_normal((8, 10, 12))
        assert np.sum(np.abs(fft3(x)) ** 2) / x.size == pytest.approx(np.sum(x**2), rel=1e-12)

    def test_round_trip(self, rng):
        x = rng.standard_normal((8, 10, 12))
        assert np.abs(ifft3(fft3(x)) - x).max() < 1e-12

    def test_batched_leading_axes(self, rng):
        x = rng.standard_normal((3, 4, 4, 4))
        np.testing.assert_allclose(fft3(x)[1], fft3(x[1]))


class TestKGrid:
    """Tests for KGrid frequency coordinates."""

    def test_origin_and_spacing(self):
        grid = KGrid((8, 8, 10), (1.0, 1.0, 0.5))
        kx, _, kz = grid.axes
        assert kx[0] == 0.0
        assert kx[1] == pytest.approx(1 / 8)
        assert kz[1] == pytest.approx(1 / 5)
        assert grid.k2[0, 0, 0] == 0.0

    def test_conjugate_symmetry(self):
        grid = KGrid((6, 7, 8))
        k2 = grid.k2
        mirrored = np.roll(k2[::-1, ::-1, ::-1], shift=(1, 1, 1), axis=(0, 1, 2))
        np.testing.assert_array_equal(k2, mirrored)

    def test_offsets_are_signed(self):
        ix, _, _ = KGrid((6, 6, 6)).offsets()
        assert list(ix[:, 0, 0]) == [0, 1, 2, -3, -2, -1]

    def test_invalid_dims(self):
        with pytest.raises(KernelError):
            KGrid((0, 4, 4))
