# this_file: src/qsmkit/volume/nifti.py
"""Minimal NIfTI-1 interop: single-frame float32/int16 volumes.

Orientation matrices are not interpreted; only dims, pixdim and the
scl_slope/scl_inter scaling are honoured.
"""

from pathlib import Path

import nibabel as nib
import numpy as np
from loguru import logger

from qsmkit.core.constants import NIFTI_FLOAT32, NIFTI_INT16, NIFTI_MAGIC, UnitTag
from qsmkit.core.exceptions import (
    BadMagicError,
    DimensionalityError,
    TruncatedPayloadError,
    UnsupportedDatatypeError,
    VolumeFormatError,
)
from qsmkit.volume.rawio import narrow_float32
from qsmkit.volume.volume import Volume3D

SUPPORTED_DATATYPES = {NIFTI_FLOAT32: "float32", NIFTI_INT16: "int16"}


def _read_header(path: Path, fileobj) -> nib.Nifti1Header:  # noqa: ANN001
    try:
        header = nib.Nifti1Header.from_fileobj(fileobj, check=False)
    except Exception as e:
        msg = f"{path}: unreadable NIfTI header: {e}"
        raise VolumeFormatError(msg) from e
    magic = bytes(header["magic"]).rstrip(b"\x00")
    if magic != NIFTI_MAGIC:
        msg = f"{path}: NIfTI magic {magic!r}, expected {NIFTI_MAGIC!r}"
        raise BadMagicError(msg)
    return header


def load_nifti(path: str | Path, unit: UnitTag = UnitTag.ARBITRARY) -> Volume3D:
    """Read a single-frame NIfTI-1 file into a Volume3D."""
    path = Path(path)
    with open(path, "rb") as f:
        header = _read_header(path, f)
        code = int(header["datatype"])
        if code not in SUPPORTED_DATATYPES:
            msg = f"{path}: datatype code {code} not supported (float32=16, int16=4)"
            raise UnsupportedDatatypeError(msg)
        dim = [int(d) for d in header["dim"]]
        n_dims = dim[0]
        if n_dims < 3 or any(d > 1 for d in dim[4 : n_dims + 1]):
            msg = f"{path}: expected one 3D frame, header dim = {dim[: n_dims + 1]}"
            raise DimensionalityError(msg)
        try:
            raw = np.asarray(header.raw_data_from_fileobj(f))
        except (OSError, ValueError) as e:
            msg = f"{path}: {e}"
            raise TruncatedPayloadError(msg) from e

    raw = raw.reshape(dim[1:4], order="F").astype(np.float64)
    slope = float(header["scl_slope"])
    if slope != 0 and np.isfinite(slope):
        inter = float(header["scl_inter"])
        raw = slope * raw + (inter if np.isfinite(inter) else 0.0)

    affine = header.get_best_affine()
    if np.count_nonzero(affine[:3, :3] - np.diag(np.diag(affine[:3, :3]))):
        logger.warning(f"{path}: orientation matrix is not axis-aligned; ignoring it")
    pixdim = tuple(abs(float(p)) or 1.0 for p in header["pixdim"][1:4])
    return Volume3D(raw, pixdim, unit)  # type: ignore[arg-type]


def save_nifti(volume: Volume3D, path: str | Path) -> None:
    """Write ``volume`` as a float32 single-file NIfTI-1 image."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image = nib.Nifti1Image(narrow_float32(volume.data, path), np.diag([*volume.voxel_size, 1.0]))
    image.header.set_data_dtype(np.float32)
    image.header.set_zooms(volume.voxel_size)
    image.header.set_slope_inter(1.0, 0.0)
    nib.save(image, path)
    logger.debug(f"Wrote NIfTI {volume.dims} to {path}")
