# this_file: tests/test_volume/test_files.py
"""Tests for extension-based format dispatch."""

import numpy as np

from qsmkit.core.constants import RAW_MAGIC, UnitTag
from qsmkit.volume.files import is_nifti, read_mask, read_volume, write_volume
from qsmkit.volume.volume import Volume3D


class TestFiles:
    """Tests for read_volume/write_volume/read_mask."""

    def test_dispatch_by_extension(self, tmp_path):
        volume = Volume3D(np.ones((2, 2, 2)), unit=UnitTag.PPM)
        raw = write_volume(volume, tmp_path / "a.qsmv")
        nii = write_volume(volume, tmp_path / "a.nii")
        assert raw.read_bytes()[:4] == RAW_MAGIC
        assert is_nifti(nii) and not is_nifti(raw)
        assert read_volume(raw).unit is UnitTag.PPM
        assert read_volume(nii, UnitTag.PPM).unit is UnitTag.PPM

    def test_unit_override(self, tmp_path):
        path = write_volume(Volume3D(np.ones((2, 2, 2)), unit=UnitTag.PPM), tmp_path / "b.qsmv")
        assert read_volume(path, UnitTag.RADIANS).unit is UnitTag.RADIANS

    def test_read_mask_nonzero(self, tmp_path):
        data = np.zeros((3, 3, 3))
        data[0, 0, 0] = 0.25
        data[2, 2, 2] = -1.0
        mask = read_mask(write_volume(Volume3D(data), tmp_path / "m.qsmv"))
        assert mask.count == 2
