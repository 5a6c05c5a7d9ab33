# this_file: src/qsmkit/volume/__init__.py
"""Volumes, masks and their file formats."""

from qsmkit.volume.files import read_mask, read_volume, write_volume
from qsmkit.volume.morphology import dilate_mask, distance_to_boundary, erode_mask, threshold_mask
from qsmkit.volume.nifti import load_nifti, save_nifti
from qsmkit.volume.rawio import load_raw, save_raw
from qsmkit.volume.volume import Mask, Volume3D, require_same_dims

__all__ = [
    "Mask",
    "Volume3D",
    "dilate_mask",
    "distance_to_boundary",
    "erode_mask",
    "load_nifti",
    "load_raw",
    "read_mask",
    "read_volume",
    "require_same_dims",
    "save_nifti",
    "save_raw",
    "threshold_mask",
    "write_volume",
]
