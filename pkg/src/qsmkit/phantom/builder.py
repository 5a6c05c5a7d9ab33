# this_file: src/qsmkit/phantom/builder.py
"""Rasterize a PhantomSpec into susceptibility, brain mask and labels."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from loguru import logger
from scipy import ndimage

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import PhantomError
from qsmkit.phantom.spec import PhantomSpec, Structure
from qsmkit.volume.volume import Mask, Volume3D


class Phantom(NamedTuple):
    chi: Volume3D
    brain_mask: Mask
    labels: Volume3D


def voxel_coordinates(spec: PhantomSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Voxel-centre positions in mm; index n//2 sits at 0 on every axis."""
    axes = [(np.arange(n) - n // 2) * d for n, d in zip(spec.dims, spec.voxel_size)]
    x, y, z = np.meshgrid(*axes, indexing="ij")
    return x, y, z


def _check_bounds(spec: PhantomSpec, structure: Structure) -> None:
    for axis, (c, e, n, d) in enumerate(zip(structure.center, structure.extent(), spec.dims, spec.voxel_size)):
        half = n * d / 2.0
        if c - e < -half or c + e > half:
            msg = f"structure {structure.name or structure.label} leaves the grid along axis {axis}"
            raise PhantomError(msg)


def build_phantom(spec: PhantomSpec) -> Phantom:
    """Build the susceptibility map of ``spec``.

    Later structures override earlier ones. Everything outside ``spec.head``
    takes ``spec.outside_susceptibility``; uncovered voxels inside the head
    are CSF-like (0 ppm). Background sources are Gaussian-smoothed by
    ``background_smoothing_mm`` while brain voxels keep their exact values.

    Raises:
        PhantomError: A structure leaves the grid, overlaps across the
            brain/background split, or the brain mask is empty.
    """
    for structure in (*spec.structures, *spec.background_structures):
        _check_bounds(spec, structure)
    x, y, z = voxel_coordinates(spec)

    brain = np.zeros(spec.dims, dtype=bool)
    brain_chi = np.zeros(spec.dims)
    labels = np.zeros(spec.dims)
    for structure in spec.structures:
        cover = structure.occupancy(x, y, z)
        brain |= cover
        brain_chi[cover] = structure.susceptibility
        labels[cover] = structure.label
    if not brain.any():
        msg = "phantom has an empty brain mask"
        raise PhantomError(msg)

    background = np.full(spec.dims, spec.outside_susceptibility)
    if spec.head is not None:
        background[spec.head.occupancy(x, y, z)] = 0.0
    for structure in spec.background_structures:
        cover = structure.occupancy(x, y, z)
        if np.any(cover & brain):
            msg = f"background structure {structure.name or structure.label} overlaps the brain"
            raise PhantomError(msg)
        background[cover] = structure.susceptibility

    if spec.background_smoothing_mm > 0:
        sigma = [spec.background_smoothing_mm / d for d in spec.voxel_size]
        background = ndimage.gaussian_filter(background, sigma=sigma, mode="wrap")
    chi = np.where(brain, brain_chi, background)
    logger.debug(f"Built phantom {spec.dims}: {int(brain.sum())} brain voxels, {len(spec.structures)} structures")
    return Phantom(
        chi=Volume3D(chi, spec.voxel_size, UnitTag.PPM),
        brain_mask=Mask(brain, spec.voxel_size),
        labels=Volume3D(labels, spec.voxel_size, UnitTag.DIMENSIONLESS),
    )


def zero_background(spec: PhantomSpec) -> PhantomSpec:
    """Copy of ``spec`` whose only sources are brain structures."""
    return spec.model_copy(update={"background_structures": [], "head": None, "outside_susceptibility": 0.0})


def zero_brain(spec: PhantomSpec) -> PhantomSpec:
    """Copy of ``spec`` with every brain structure set to 0 ppm, keeping the mask."""
    structures = [s.model_copy(update={"susceptibility": 0.0}) for s in spec.structures]
    return spec.model_copy(update={"structures": structures})
