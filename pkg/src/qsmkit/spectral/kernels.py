# this_file: src/qsmkit/spectral/kernels.py
"""Real, even k-space multipliers and spectral convolution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from qsmkit.core.exceptions import DimensionMismatchError, KernelError, NumericalError
from qsmkit.spectral.fft import fft3, ifft3
from qsmkit.volume.volume import Dims, Volume3D

if TYPE_CHECKING:
    from collections.abc import Sequence

    from qsmkit.spectral.grid import KGrid

IMAG_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class KSpaceKernel:
    """A real spectral multiplier on the DFT grid."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 3:
            msg = f"kernel must be 3D, got shape {values.shape}"
            raise KernelError(msg)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dims(self) -> Dims:
        nx, ny, nz = self.values.shape
        return nx, ny, nz

    def pseudo_inverse(self, tol: float = 0.0) -> KSpaceKernel:
        """1/K where |K| > tol, zero elsewhere."""
        out = np.zeros_like(self.values)
        keep = np.abs(self.values) > tol
        out[keep] = 1.0 / self.values[keep]
        return KSpaceKernel(out)

    def is_even(self) -> bool:
        """K(k) == K(-k) on the DFT grid."""
        return bool(np.array_equal(_mirror(self.values), self.values))


def _mirror(values: np.ndarray) -> np.ndarray:
    """values at -k for every k on the DFT grid."""
    return np.roll(values[::-1, ::-1, ::-1], shift=(1, 1, 1), axis=(0, 1, 2))


def dipole_kernel(grid: KGrid, b0_axis: Sequence[float] = (0.0, 0.0, 1.0)) -> KSpaceKernel:
    """Unit dipole response D(k) = 1/3 - (k.b)**2/|k|**2 with D(0) = 0."""
    b = np.asarray(b0_axis, dtype=np.float64)
    norm = float(np.linalg.norm(b))
    if b.shape != (3,) or norm == 0 or not np.isfinite(norm):
        msg = f"B0 axis must be a non-zero 3-vector, got {b0_axis}"
        raise KernelError(msg)
    b = b / norm
    kx, ky, kz = grid.mesh
    kb = kx * b[0] + ky * b[1] + kz * b[2]
    k2 = grid.k2
    with np.errstate(divide="ignore", invalid="ignore"):
        values = 1.0 / 3.0 - kb**2 / k2
    values[0, 0, 0] = 0.0
    # Nyquist planes of even axes are self-mirrored; symmetrize so oblique axes stay even.
    return KSpaceKernel(0.5 * (values + _mirror(values)))


def laplacian_kernel(grid: KGrid) -> KSpaceKernel:
    """Continuous-Fourier Laplacian -4 pi**2 |k|**2."""
    return KSpaceKernel(-4.0 * np.pi**2 * grid.k2)


def image_kernel_spectrum(kernel: np.ndarray, dims: Dims) -> KSpaceKernel:
    """Spectrum of a centred, odd-sized image-space kernel placed at the grid origin.

    The kernel must be point-symmetric so its spectrum is real.
    """
    if any(s % 2 == 0 or s > n for s, n in zip(kernel.shape, dims)):
        msg = f"kernel of shape {kernel.shape} does not fit grid {dims} with a centre voxel"
        raise KernelError(msg)
    canvas = np.zeros(dims)
    half = [s // 2 for s in kernel.shape]
    canvas[: kernel.shape[0], : kernel.shape[1], : kernel.shape[2]] = kernel
    canvas = np.roll(canvas, shift=[-h for h in half], axis=(0, 1, 2))
    return KSpaceKernel(np.real(fft3(canvas)))


def convolve_array(array: np.ndarray, kernel: KSpaceKernel) -> np.ndarray:
    """real(ifft3(K * fft3(x))) for a real array whose trailing axes match the kernel."""
    if array.shape[-3:] != kernel.dims:
        msg = f"dimension mismatch: array {array.shape[-3:]} vs kernel {kernel.dims}"
        raise DimensionMismatchError(msg)
    result = ifft3(kernel.values * fft3(array))
    real = np.real(result)
    scale = float(np.linalg.norm(real))
    if scale > 0:
        residue = float(np.linalg.norm(np.imag(result))) / scale
        if residue > IMAG_TOLERANCE:
            msg = f"spectral convolution left imaginary residue {residue:.3e}; kernel is not real and even"
            raise NumericalError(msg)
    return real


def convolve_k(volume: Volume3D, kernel: KSpaceKernel) -> Volume3D:
    """Apply a spectral multiplier to a volume."""
    logger.debug(f"convolve_k on {volume.dims}")
    return volume.with_data(convolve_array(volume.data, kernel))
