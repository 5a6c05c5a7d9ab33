# this_file: src/qsmkit/volume/rawio.py
"""Self-describing little-endian raw volume format ("QSMV").

Layout: magic ``QSMV`` | version u16 | unit u16 | nx, ny, nz u32 | dx, dy, dz f32 (mm)
followed by nx*ny*nz float32 values with x varying fastest.
"""

from pathlib import Path

import numpy as np
from loguru import logger

from qsmkit.core.constants import RAW_MAGIC, RAW_VERSION, UnitTag
from qsmkit.core.exceptions import BadMagicError, DimensionOverflowError, TruncatedPayloadError, VolumeFormatError
from qsmkit.volume.volume import Volume3D

header_dtype = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u2"),
        ("unit", "<u2"),
        ("dims", "<u4", (3,)),
        ("voxel_size", "<f4", (3,)),
    ]
)

FLOAT32_MAX = float(np.finfo(np.float32).max)

# 4 GiB of float32 payload; anything larger is treated as a corrupt header.
MAX_VOXELS = 2**30


def narrow_float32(data: np.ndarray, path: str | Path) -> np.ndarray:
    """Cast to float32, refusing finite values that would become inf."""
    finite = data[np.isfinite(data)]
    if finite.size and float(np.abs(finite).max()) > FLOAT32_MAX:
        msg = f"{path}: values up to {float(np.abs(finite).max()):.3e} exceed the float32 range"
        raise VolumeFormatError(msg)
    return data.astype(np.float32)


def save_raw(volume: Volume3D, path: str | Path) -> None:
    """Write ``volume`` in the raw QSMV format."""
    header = np.zeros((), dtype=header_dtype)
    header["magic"] = RAW_MAGIC
    header["version"] = RAW_VERSION
    header["unit"] = int(volume.unit)
    header["dims"] = volume.dims
    header["voxel_size"] = volume.voxel_size
    path = Path(path)
    payload = narrow_float32(volume.data, path).astype("<f4").tobytes(order="F")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(payload)
    logger.debug(f"Wrote {volume.dims} volume to {path}")


def load_raw(path: str | Path) -> Volume3D:
    """Read a raw QSMV volume."""
    blob = Path(path).read_bytes()
    if blob[: len(RAW_MAGIC)] != RAW_MAGIC:
        msg = f"{path}: bad magic {blob[: len(RAW_MAGIC)]!r}"
        raise BadMagicError(msg)
    if len(blob) < header_dtype.itemsize:
        msg = f"{path}: header truncated at {len(blob)} bytes"
        raise TruncatedPayloadError(msg)
    header = np.frombuffer(blob, dtype=header_dtype, count=1)[0]
    if int(header["version"]) != RAW_VERSION:
        msg = f"{path}: unsupported version {int(header['version'])}"
        raise VolumeFormatError(msg)
    dims = tuple(int(n) for n in header["dims"])
    n_voxels = int(np.prod(dims, dtype=np.uint64))
    if min(dims) == 0 or n_voxels > MAX_VOXELS:
        msg = f"{path}: invalid dimensions {dims}"
        raise DimensionOverflowError(msg)
    payload = blob[header_dtype.itemsize :]
    expected = 4 * n_voxels
    if len(payload) < expected:
        msg = f"{path}: payload has {len(payload)} bytes, header announces {expected}"
        raise TruncatedPayloadError(msg)
    if len(payload) > expected:
        logger.warning(f"{path}: ignoring {len(payload) - expected} trailing bytes")
    try:
        unit = UnitTag(int(header["unit"]))
    except ValueError as e:
        msg = f"{path}: unknown unit tag {int(header['unit'])}"
        raise VolumeFormatError(msg) from e
    data = np.frombuffer(payload, dtype="<f4", count=n_voxels).reshape(dims, order="F")
    voxel_size = tuple(float(v) for v in header["voxel_size"])
    return Volume3D(data.astype(np.float64), voxel_size, unit)  # type: ignore[arg-type]
