# this_file: src/qsmkit/metrics/quality.py
"""Masked reconstruction quality metrics: RMSE, HFEN and SSIM."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from skimage.metrics import structural_similarity

from qsmkit.core.constants import HFEN_SIGMA, HFEN_SUPPORT, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_SUPPORT
from qsmkit.core.exceptions import ShapeError, ZeroNormError
from qsmkit.spectral.kernels import KSpaceKernel, convolve_array, image_kernel_spectrum
from qsmkit.volume.volume import Dims, Mask, Volume3D, require_same_dims


def _check(recon: Volume3D, truth: Volume3D, mask: Mask) -> None:
    require_same_dims(recon, truth)
    require_same_dims(truth, mask)


def _require_extent(dims: Dims, support: int, metric: str) -> None:
    if min(dims) < support:
        msg = f"{metric} needs at least {support} voxels along every axis, got {dims}"
        raise ShapeError(msg)


def rmse(recon: Volume3D, truth: Volume3D, mask: Mask) -> float:
    """Normalized RMSE in percent: 100 ||M (recon - truth)|| / ||M truth||."""
    _check(recon, truth, mask)
    m = mask.bits
    denom = float(np.linalg.norm(truth.data[m]))
    if denom == 0:
        msg = "RMSE undefined: truth is zero inside the mask"
        raise ZeroNormError(msg)
    return 100.0 * float(np.linalg.norm(recon.data[m] - truth.data[m])) / denom


def log_kernel(sigma: float = HFEN_SIGMA, support: int = HFEN_SUPPORT) -> np.ndarray:
    """Laplacian-of-Gaussian on a cubic support, shifted to sum exactly to zero."""
    half = support // 2
    ax = np.arange(-half, half + 1, dtype=np.float64)
    x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
    r2 = x**2 + y**2 + z**2
    g = np.exp(-r2 / (2.0 * sigma**2))
    g /= g.sum()
    kernel = g * (r2 - 3.0 * sigma**2) / sigma**4
    kernel -= kernel.mean()
    # fold the remaining rounding into the centre tap
    kernel[half, half, half] -= kernel.sum()
    return kernel


@lru_cache(maxsize=8)
def _log_spectrum(dims: Dims) -> KSpaceKernel:
    return image_kernel_spectrum(log_kernel(), dims)


def hfen(recon: Volume3D, truth: Volume3D, mask: Mask) -> float:
    """High-frequency error norm in percent, LoG sigma 1.5 voxels on a 15^3 support."""
    _check(recon, truth, mask)
    _require_extent(truth.dims, HFEN_SUPPORT, "HFEN")
    spectrum = _log_spectrum(truth.dims)
    m = mask.bits
    filtered_truth = convolve_array(truth.data, spectrum)[m]
    denom = float(np.linalg.norm(filtered_truth))
    if denom == 0:
        msg = "HFEN undefined: filtered truth is zero inside the mask"
        raise ZeroNormError(msg)
    filtered_error = convolve_array(recon.data - truth.data, spectrum)[m]
    return 100.0 * float(np.linalg.norm(filtered_error)) / denom


def ssim(recon: Volume3D, truth: Volume3D, mask: Mask) -> float:
    """Mean local SSIM over the mask; Gaussian window sigma 1.5 (11^3), K1 0.01, K2 0.03.

    The dynamic range is the max - min of ``truth`` inside the mask.
    """
    _check(recon, truth, mask)
    _require_extent(truth.dims, SSIM_SUPPORT, "SSIM")
    m = mask.bits
    if not m.any():
        msg = "SSIM undefined on an empty mask"
        raise ZeroNormError(msg)
    values = truth.data[m]
    data_range = float(values.max() - values.min())
    if data_range == 0:
        msg = "SSIM undefined: truth has zero dynamic range inside the mask"
        raise ZeroNormError(msg)
    _, local = structural_similarity(
        truth.data,
        recon.data,
        data_range=data_range,
        gaussian_weights=True,
        sigma=SSIM_SIGMA,
        use_sample_covariance=False,
        K1=SSIM_K1,
        K2=SSIM_K2,
        full=True,
    )
    return float(np.mean(local[m]))
