# this_file: tests/test_volume/test_morphology.py
"""Tests for erosion, boundary distance and threshold masking."""

import numpy as np
import pytest

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import EmptyMaskError, VolumeError
from qsmkit.volume.morphology import dilate_mask, distance_to_boundary, erode_mask, threshold_mask
from qsmkit.volume.volume import Mask, Volume3D


class TestDistanceToBoundary:
    """Tests for distance_to_boundary."""

    def test_cube_centre_and_face(self):
        distance = distance_to_boundary(Mask.full((21, 21, 21))).data
        assert 10 <= distance[10, 10, 10] <= 11
        assert 0 < distance[0, 10, 10] <= 2

    def test_ball_centre(self, make_ball):
        distance = distance_to_boundary(make_ball((32, 32, 32), 12)).data
        assert 11 <= distance[16, 16, 16] <= 13

    def test_zero_outside(self, make_ball):
        mask = make_ball((16, 16, 16), 4)
        assert not distance_to_boundary(mask).data[~mask.bits].any()

    def test_empty_mask(self):
        with pytest.raises(EmptyMaskError):
            distance_to_boundary(Mask(np.zeros((4, 4, 4))))


class TestErodeMask:
    """Tests for erode_mask and dilate_mask."""

    def test_zero_radius_is_identity(self, make_ball):
        mask = make_ball((16, 16, 16), 5)
        np.testing.assert_array_equal(erode_mask(mask, 0).bits, mask.bits)

    def test_full_cube_loses_one_layer(self):
        eroded = erode_mask(Mask.full((8, 8, 8)), 1)
        expected = np.zeros((8, 8, 8), dtype=bool)
        expected[1:-1, 1:-1, 1:-1] = True
        np.testing.assert_array_equal(eroded.bits, expected)

    def test_ball_radius_bounds(self, make_ball):
        eroded = erode_mask(make_ball((32, 32, 32), 10), 3)
        assert make_ball((32, 32, 32), 6).issubset(eroded)
        assert eroded.issubset(make_ball((32, 32, 32), 8))

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_matches_brute_force(self, rng, r, erode_reference):
        bits = rng.random((12, 12, 12)) > 0.1
        np.testing.assert_array_equal(erode_mask(Mask(bits), r).bits, erode_reference(bits, r))

    def test_matches_distance_threshold(self, make_ball):
        mask = make_ball((24, 24, 24), 9)
        distance = distance_to_boundary(mask).data
        for r in range(5):
            np.testing.assert_array_equal(erode_mask(mask, r).bits, (distance > r) if r else mask.bits)

    def test_composed_erosion_contains_single_erosion(self, make_ball):
        mask = make_ball((32, 32, 32), 12)
        for a, b in [(1, 2), (2, 3), (3, 3)]:
            assert erode_mask(mask, a + b).issubset(erode_mask(erode_mask(mask, a), b))

    def test_erode_then_dilate_never_grows(self, make_ball):
        mask = make_ball((24, 24, 24), 8)
        for r in (1, 2, 3):
            assert dilate_mask(erode_mask(mask, r), r).issubset(mask)

    def test_negative_radius(self):
        with pytest.raises(VolumeError):
            erode_mask(Mask.full((4, 4, 4)), -1)


class TestThresholdMask:
    """Tests for threshold_mask."""

    def test_binary_volume_gives_support(self, make_ball):
        mask = make_ball((16, 16, 16), 5)
        out = threshold_mask(mask.as_volume(), 0.5)
        np.testing.assert_array_equal(out.bits, mask.bits)

    def test_keeps_largest_component(self):
        data = np.zeros((20, 20, 20))
        data[2:7, 2:7, 2:6] = 1.0  # 100 voxels
        data[14:16, 14:19, 14:15] = 1.0  # 10 voxels
        out = threshold_mask(Volume3D(data), 0.5)
        assert out.count == 100
        assert out.bits[3, 3, 3]
        assert not out.bits[15, 15, 14]

    def test_gaussian_bump(self):
        sigma = 4.0
        x, y, z = np.meshgrid(*(np.arange(32) - 16,) * 3, indexing="ij")
        r2 = x**2 + y**2 + z**2
        out = threshold_mask(Volume3D(np.exp(-r2 / (2 * sigma**2))), float(np.exp(-0.5)))
        assert Mask(r2 <= (sigma - 1) ** 2).issubset(out)
        assert out.issubset(Mask(r2 <= (sigma + 1) ** 2))

    def test_all_zero(self):
        with pytest.raises(EmptyMaskError):
            threshold_mask(Volume3D.zeros((4, 4, 4)), 0.5)

    @pytest.mark.parametrize("frac", [0.0, 1.0, -0.2])
    def test_bad_fraction(self, frac):
        with pytest.raises(VolumeError):
            threshold_mask(Volume3D(np.ones((4, 4, 4))), frac)

    def test_negative_input(self):
        with pytest.raises(VolumeError):
            threshold_mask(Volume3D(-np.ones((4, 4, 4)), unit=UnitTag.ARBITRARY), 0.5)
