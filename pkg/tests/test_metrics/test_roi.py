# this_file: tests/test_metrics/test_roi.py
"""Tests for ROI statistics."""

import numpy as np
import pytest

from qsmkit.core.exceptions import VolumeError
from qsmkit.metrics.roi import roi_error, roi_stats
from qsmkit.volume.volume import Mask, Volume3D


def _labels():
    labels = np.zeros((4, 4, 4))
    labels[:2] = 1
    labels[2:, :2] = 2
    return Volume3D(labels)


class TestRoiStats:
    """Tests for roi_stats and roi_error."""

    def test_constant_region(self):
        stats = roi_stats(Volume3D(np.full((4, 4, 4), 0.05)), _labels())
        assert set(stats) == {1, 2}
        assert stats[1].mean == pytest.approx(0.05)
        assert stats[1].sd == pytest.approx(0.0, abs=1e-15)
        assert stats[1].count == 32
        assert stats[2].count == 16

    def test_population_sd(self):
        values = np.zeros((4, 4, 4))
        values[0] = 1.0
        values[1] = 3.0
        stat = roi_stats(Volume3D(values), _labels())[1]
        assert stat.mean == pytest.approx(2.0)
        assert stat.sd == pytest.approx(1.0)

    def test_mask_restricts(self):
        bits = np.zeros((4, 4, 4), dtype=bool)
        bits[0] = True
        stats = roi_stats(Volume3D(np.ones((4, 4, 4))), _labels(), Mask(bits))
        assert set(stats) == {1}
        assert stats[1].count == 16

    def test_non_integer_labels(self):
        with pytest.raises(VolumeError):
            roi_stats(Volume3D(np.ones((2, 2, 2))), Volume3D(np.full((2, 2, 2), 1.5)))

    def test_roi_error(self):
        truth = Volume3D(np.full((4, 4, 4), 0.05))
        recon = Volume3D(np.full((4, 4, 4), 0.02))
        errors = roi_error(recon, truth, _labels())
        assert errors[1] == pytest.approx(0.03)
        assert errors[2] == pytest.approx(0.03)
