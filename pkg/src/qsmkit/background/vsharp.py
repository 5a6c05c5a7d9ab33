# this_file: src/qsmkit/background/vsharp.py
"""Variable-radius spherical mean value (V-SHARP) background field removal."""

from __future__ import annotations

import numpy as np
from loguru import logger

from qsmkit.core.config import SmvConfig
from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import KernelError, ThinMaskError
from qsmkit.preprocess.normalize import NormalizedPhase
from qsmkit.spectral.fft import fft3
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import KSpaceKernel, convolve_array
from qsmkit.volume.morphology import distance_to_boundary
from qsmkit.volume.volume import Mask, Volume3D, require_same_dims


def smv_kernel(r: float, grid: KGrid) -> KSpaceKernel:
    """Spectrum of the normalized digital ball of radius ``r`` voxels.

    A radius below 1 is a single voxel and yields the identity kernel.
    """
    if r < 0 or r > min(grid.dims) / 2:
        msg = f"SMV radius {r} must lie in [0, {min(grid.dims) / 2}] for grid {grid.dims}"
        raise KernelError(msg)
    ox, oy, oz = grid.offsets()
    ball = (ox**2 + oy**2 + oz**2 <= r**2).astype(np.float64)
    ball /= ball.sum()
    return KSpaceKernel(np.real(fft3(ball)))


def vsharp_remove(
    psi: NormalizedPhase | Volume3D, mask: Mask, cfg: SmvConfig | None = None
) -> tuple[Volume3D, Mask]:
    """Remove the harmonic background field inside ``mask``.

    Each voxel is high-passed with the largest ball (r_min..r_max, step 1)
    that fits inside the mask around it. The composite is deconvolved by
    1 - S for the largest realised radius, zeroing modes below ``truncation``.

    Returns:
        The local field (ppm, zero outside the reliable mask) and the reliable
        mask, i.e. the mask eroded by r_min.

    Raises:
        ThinMaskError: No voxel fits a ball of radius r_min.
    """
    cfg = cfg or SmvConfig()
    field = psi.psi if isinstance(psi, NormalizedPhase) else psi
    require_same_dims(field, mask)
    distance = distance_to_boundary(mask).data
    reliable = distance > cfg.r_min
    if not reliable.any():
        msg = f"mask too thin for r_min={cfg.r_min}: largest inscribed distance {distance.max():.2f}"
        raise ThinMaskError(msg)

    grid = KGrid.of(field)
    r_cap = min(cfg.r_max, int(np.floor(min(grid.dims) / 2)))
    if r_cap < cfg.r_max:
        logger.warning(f"V-SHARP r_max {cfg.r_max} capped to {r_cap} by grid {grid.dims}")
    radii = [r for r in range(r_cap, cfg.r_min - 1, -1) if np.any(distance > r)]
    if not radii:
        msg = f"no SMV radius in [{cfg.r_min}, {r_cap}] fits inside the mask"
        raise ThinMaskError(msg)

    masked = np.where(mask.bits, field.data, 0.0)
    highpass = np.zeros(grid.dims)
    assigned = np.zeros(grid.dims, dtype=bool)
    for r in radii:
        shell = (distance > r) & ~assigned
        if not shell.any():
            continue
        smoothed = convolve_array(masked, smv_kernel(r, grid))
        highpass[shell] = masked[shell] - smoothed[shell]
        assigned |= shell

    r_eff = radii[0]
    denom = 1.0 - smv_kernel(r_eff, grid).values
    keep = np.abs(denom) >= cfg.truncation
    inverse = np.zeros_like(denom)
    inverse[keep] = 1.0 / denom[keep]
    dropped = 1.0 - float(keep.mean())
    if dropped > 0.5:
        logger.warning(f"V-SHARP truncation {cfg.truncation} zeroes {dropped:.0%} of the spectrum")
    logger.debug(f"V-SHARP radii {radii[-1]}..{r_eff}, {int(reliable.sum())} reliable voxels")

    local = convolve_array(highpass, KSpaceKernel(inverse))
    local = np.where(reliable, local, 0.0)
    return field.with_data(local, UnitTag.PPM), Mask(reliable, mask.voxel_size)
