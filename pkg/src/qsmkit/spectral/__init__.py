# this_file: src/qsmkit/spectral/__init__.py
"""FFT-domain machinery shared by simulation, filtering and inversion."""

from qsmkit.spectral.fft import fft3, ifft3
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import (
    KSpaceKernel,
    convolve_array,
    convolve_k,
    dipole_kernel,
    image_kernel_spectrum,
    laplacian_kernel,
)

__all__ = [
    "KGrid",
    "KSpaceKernel",
    "convolve_array",
    "convolve_k",
    "dipole_kernel",
    "fft3",
    "ifft3",
    "image_kernel_spectrum",
    "laplacian_kernel",
]
