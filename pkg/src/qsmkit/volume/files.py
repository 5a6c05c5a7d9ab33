# this_file: src/qsmkit/volume/files.py
"""Format dispatch by file extension: NIfTI-1 for .nii, raw QSMV otherwise."""

from __future__ import annotations

from pathlib import Path

from qsmkit.core.constants import UnitTag
from qsmkit.volume.nifti import load_nifti, save_nifti
from qsmkit.volume.rawio import load_raw, save_raw
from qsmkit.volume.volume import Mask, Volume3D


def is_nifti(path: str | Path) -> bool:
    return Path(path).suffix.lower() == ".nii"


def read_volume(path: str | Path, unit: UnitTag | None = None) -> Volume3D:
    """Load a volume; ``unit`` overrides the stored tag (NIfTI carries none)."""
    if is_nifti(path):
        return load_nifti(path, unit or UnitTag.ARBITRARY)
    volume = load_raw(path)
    return volume if unit is None else volume.with_data(volume.data, unit)


def write_volume(volume: Volume3D, path: str | Path) -> Path:
    path = Path(path)
    if is_nifti(path):
        save_nifti(volume, path)
    else:
        save_raw(volume, path)
    return path


def read_mask(path: str | Path) -> Mask:
    """Nonzero voxels of a stored volume."""
    volume = read_volume(path)
    return Mask(volume.data != 0, volume.voxel_size)
