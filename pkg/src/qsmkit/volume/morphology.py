# this_file: src/qsmkit/volume/morphology.py
"""Mask morphology: Euclidean erosion, boundary distance and threshold masking."""

import numpy as np
from loguru import logger
from scipy import ndimage

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import EmptyMaskError, VolumeError
from qsmkit.volume.volume import Mask, Volume3D


def _boundary_distance(bits: np.ndarray) -> np.ndarray:
    """Euclidean distance (voxels) to the nearest voxel outside ``bits``; the grid border counts as outside."""
    padded = np.pad(bits, 1, mode="constant", constant_values=False)
    return ndimage.distance_transform_edt(padded)[1:-1, 1:-1, 1:-1]


def distance_to_boundary(mask: Mask) -> Volume3D:
    """Per-voxel distance to the nearest outside voxel, 0 outside the mask."""
    if mask.is_empty:
        msg = "distance_to_boundary needs a non-empty mask"
        raise EmptyMaskError(msg)
    return Volume3D(_boundary_distance(mask.bits), mask.voxel_size, UnitTag.DIMENSIONLESS)


def erode_mask(mask: Mask, r: int) -> Mask:
    """Keep voxels whose whole Euclidean ball of radius ``r`` lies inside the mask."""
    if r < 0:
        msg = f"erosion radius must be >= 0, got {r}"
        raise VolumeError(msg)
    if r == 0 or mask.is_empty:
        return mask
    return Mask(_boundary_distance(mask.bits) > r, mask.voxel_size)


def dilate_mask(mask: Mask, r: int) -> Mask:
    """Add every voxel within Euclidean distance ``r`` of the mask."""
    if r <= 0 or mask.is_empty:
        return mask
    outside = ndimage.distance_transform_edt(~mask.bits)
    return Mask(outside <= r, mask.voxel_size)


def largest_component(bits: np.ndarray) -> np.ndarray:
    """Largest 6-connected component of a boolean array."""
    labels, n = ndimage.label(bits, structure=ndimage.generate_binary_structure(3, 1))
    if n <= 1:
        return labels > 0
    sizes = np.bincount(labels.ravel())[1:]
    keep = int(np.argmax(sizes)) + 1
    logger.debug(f"threshold mask: {n} components, keeping #{keep} with {sizes[keep - 1]} voxels")
    return labels == keep


def threshold_mask(volume: Volume3D, frac: float) -> Mask:
    """Relative threshold followed by largest-connected-component selection."""
    if not 0 < frac < 1:
        msg = f"threshold fraction must lie in (0, 1), got {frac}"
        raise VolumeError(msg)
    if np.any(volume.data < 0):
        msg = "threshold_mask expects a non-negative volume"
        raise VolumeError(msg)
    peak = float(volume.data.max())
    if peak == 0:
        msg = "threshold_mask on an all-zero volume"
        raise EmptyMaskError(msg)
    return Mask(largest_component(volume.data >= frac * peak), volume.voxel_size)
