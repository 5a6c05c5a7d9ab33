# this_file: src/qsmkit/neural/predict.py
"""Whole-volume prediction by overlapping, window-blended patches."""

from __future__ import annotations

import numpy as np
from loguru import logger

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import ShapeError
from qsmkit.neural.unet import UNetModel, forward
from qsmkit.preprocess.normalize import NormalizedPhase, standardization_stats
from qsmkit.volume.volume import Mask, Volume3D, require_same_dims

PREDICT_BATCH = 4


def tile_origins(n: int, patch_size: int) -> list[int]:
    """Origins with stride patch_size/2; the last tile ends at the border."""
    if n < patch_size:
        msg = f"axis of length {n} is shorter than the {patch_size} patch"
        raise ShapeError(msg)
    origins = list(range(0, n - patch_size + 1, max(1, patch_size // 2)))
    if origins[-1] != n - patch_size:
        origins.append(n - patch_size)
    return origins


def blend_window(patch_size: int) -> np.ndarray:
    """Separable raised-cosine (sin^2) window; shifted copies at half stride sum to 1."""
    w = np.sin(np.pi * (np.arange(patch_size) + 0.5) / patch_size) ** 2
    return w[:, None, None] * w[None, :, None] * w[None, None, :]


def predict_volume(
    model: UNetModel, psi: NormalizedPhase | Volume3D, input_mask: Mask | None = None
) -> Volume3D:
    """Full-FOV susceptibility (ppm) from the total field.

    The input is standardized with the statistics stored in the model; with
    ``input_mask`` the field is zeroed outside the mask first. Overlapping
    tile predictions are averaged with the blend window, normalized by the
    accumulated weight so weights sum to one at every voxel.
    """
    volume = psi.psi if isinstance(psi, NormalizedPhase) else psi
    data = volume.data
    if input_mask is not None:
        require_same_dims(volume, input_mask)
        data = np.where(input_mask.bits, data, 0.0)
    p = model.config.patch_size
    axes = [tile_origins(n, p) for n in volume.dims]
    stats = model.stats or standardization_stats([volume.with_data(data)])
    scaled = stats.apply(data)

    window = blend_window(p)
    accum = np.zeros(volume.dims)
    weight = np.zeros(volume.dims)
    tiles = [(x, y, z) for x in axes[0] for y in axes[1] for z in axes[2]]
    logger.debug(f"Predicting {volume.dims} with {len(tiles)} tiles of {p}^3")
    for start in range(0, len(tiles), PREDICT_BATCH):
        chunk = tiles[start : start + PREDICT_BATCH]
        batch = np.stack([scaled[x : x + p, y : y + p, z : z + p] for x, y, z in chunk])
        preds = forward(model, batch, training=False)
        for (x, y, z), pred in zip(chunk, preds):
            accum[x : x + p, y : y + p, z : z + p] += window * pred
            weight[x : x + p, y : y + p, z : z + p] += window
    return volume.with_data(accum / weight, UnitTag.PPM)


def mask_for_display(volume: Volume3D, mask: Mask) -> Volume3D:
    """Zero the background of a prediction for visualization only."""
    return volume.masked(mask)
