# this_file: src/qsmkit/utils/imaging.py
"""Windowed 8-bit PNG slices of volumes."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger
from PIL import Image

from qsmkit.core.constants import DEFAULT_WINDOW
from qsmkit.core.exceptions import VolumeError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from qsmkit.volume.volume import Mask, Volume3D

AXES = {"x": 0, "y": 1, "z": 2}


def window_to_uint8(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Clamp to [lo, hi], then pixel = min(255, floor(256 (v - lo) / (hi - lo)))."""
    if not lo < hi:
        msg = f"display window needs lo < hi, got ({lo}, {hi})"
        raise VolumeError(msg)
    clipped = np.clip(values, lo, hi)
    return np.minimum(255, np.floor(256.0 * (clipped - lo) / (hi - lo))).astype(np.uint8)


def emit_slices(
    volume: Volume3D,
    axis: str | int,
    indices: Iterable[int],
    out_dir: str | Path,
    window: tuple[float, float] = DEFAULT_WINDOW,
    stem: str = "slice",
    display_mask: Mask | None = None,
) -> list[Path]:
    """Write one grayscale PNG per index, named ``{stem}_{axis}{index:03d}.png``.

    Image rows run along the second remaining axis. With ``display_mask`` the
    background is zeroed before windowing.
    """
    axis_name = axis if isinstance(axis, str) else "xyz"[axis]
    if axis_name not in AXES:
        msg = f"axis must be x, y, z or 0-2, got {axis!r}"
        raise VolumeError(msg)
    a = AXES[axis_name]
    data = volume.data if display_mask is None else volume.masked(display_mask).data
    lo, hi = window
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for index in indices:
        if not 0 <= index < volume.dims[a]:
            msg = f"slice {index} outside 0..{volume.dims[a] - 1} along {axis_name}"
            raise VolumeError(msg)
        plane = np.take(data, index, axis=a)
        outside = int(np.sum((plane < lo) | (plane > hi)))
        if outside:
            logger.warning(f"{stem} {axis_name}{index}: {outside} pixels clipped to window [{lo}, {hi}]")
        path = out_dir / f"{stem}_{axis_name}{index:03d}.png"
        Image.fromarray(np.ascontiguousarray(window_to_uint8(plane, lo, hi).T)).save(path)
        paths.append(path)
    return paths
