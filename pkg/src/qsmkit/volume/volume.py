# this_file: src/qsmkit/volume/volume.py
"""Immutable 3D volume and mask containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import DimensionMismatchError, VolumeError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

Dims = tuple[int, int, int]
VoxelSize = tuple[float, float, float]


def _frozen(array: NDArray) -> NDArray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Volume3D:
    """A 3D scalar field on a regular grid, stored as float64 with x as the first axis."""

    data: NDArray[np.float64]
    voxel_size: VoxelSize = (1.0, 1.0, 1.0)
    unit: UnitTag = UnitTag.ARBITRARY

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim != 3 or min(data.shape) < 1:
            msg = f"volume data must be a non-empty 3D array, got shape {data.shape}"
            raise VolumeError(msg)
        if not np.all(np.isfinite(data)):
            msg = "volume data contains NaN or Inf"
            raise VolumeError(msg)
        voxel_size = tuple(float(v) for v in self.voxel_size)
        if len(voxel_size) != 3 or not all(np.isfinite(v) and v > 0 for v in voxel_size):
            msg = f"voxel sizes must be three positive finite numbers, got {self.voxel_size}"
            raise VolumeError(msg)
        object.__setattr__(self, "data", _frozen(data))
        object.__setattr__(self, "voxel_size", voxel_size)
        object.__setattr__(self, "unit", UnitTag(self.unit))

    @property
    def dims(self) -> Dims:
        nx, ny, nz = self.data.shape
        return nx, ny, nz

    @property
    def n_voxels(self) -> int:
        return int(self.data.size)

    @property
    def fov(self) -> tuple[float, float, float]:
        """Field of view in mm."""
        return tuple(n * d for n, d in zip(self.dims, self.voxel_size))  # type: ignore[return-value]

    def with_data(self, data: ArrayLike, unit: UnitTag | None = None) -> Volume3D:
        """Same grid, new values."""
        return Volume3D(np.asarray(data), self.voxel_size, self.unit if unit is None else unit)

    def masked(self, mask: Mask) -> Volume3D:
        """Zero every voxel outside ``mask``."""
        require_same_dims(self, mask)
        return self.with_data(np.where(mask.bits, self.data, 0.0))

    @classmethod
    def zeros(cls, dims: Dims, voxel_size: VoxelSize = (1.0, 1.0, 1.0), unit: UnitTag = UnitTag.ARBITRARY) -> Volume3D:
        return cls(np.zeros(dims), voxel_size, unit)


@dataclass(frozen=True, eq=False)
class Mask:
    """Binary region of support on a 3D grid."""

    bits: NDArray[np.bool_]
    voxel_size: VoxelSize = field(default=(1.0, 1.0, 1.0))

    def __post_init__(self) -> None:
        bits = np.array(self.bits, dtype=bool, copy=True)
        if bits.ndim != 3:
            msg = f"mask must be 3D, got shape {bits.shape}"
            raise VolumeError(msg)
        object.__setattr__(self, "bits", _frozen(bits))
        object.__setattr__(self, "voxel_size", tuple(float(v) for v in self.voxel_size))

    @property
    def dims(self) -> Dims:
        nx, ny, nz = self.bits.shape
        return nx, ny, nz

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    @property
    def is_empty(self) -> bool:
        return not self.bits.any()

    def __and__(self, other: Mask) -> Mask:
        require_same_dims(self, other)
        return Mask(self.bits & other.bits, self.voxel_size)

    def __or__(self, other: Mask) -> Mask:
        require_same_dims(self, other)
        return Mask(self.bits | other.bits, self.voxel_size)

    def __invert__(self) -> Mask:
        return Mask(~self.bits, self.voxel_size)

    def issubset(self, other: Mask) -> bool:
        require_same_dims(self, other)
        return bool(np.all(other.bits[self.bits]))

    def as_volume(self) -> Volume3D:
        return Volume3D(self.bits.astype(np.float64), self.voxel_size, UnitTag.DIMENSIONLESS)

    @classmethod
    def full(cls, dims: Dims, voxel_size: VoxelSize = (1.0, 1.0, 1.0)) -> Mask:
        return cls(np.ones(dims, dtype=bool), voxel_size)


def require_same_dims(a: Volume3D | Mask, b: Volume3D | Mask) -> None:
    """Raise when two grids differ in shape."""
    if a.dims != b.dims:
        msg = f"dimension mismatch: {a.dims} vs {b.dims}"
        raise DimensionMismatchError(msg)
