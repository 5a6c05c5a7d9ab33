# this_file: src/qsmkit/spectral/fft.py
"""3D FFT wrappers: unnormalized forward transform, 1/N inverse."""

import numpy as np
import scipy.fft

# Parallelism only splits independent 1D transforms, so results are identical
# for any worker count.
WORKERS = -1


def fft3(array: np.ndarray) -> np.ndarray:
    """Forward 3D DFT over the last three axes."""
    return scipy.fft.fftn(array, axes=(-3, -2, -1), workers=WORKERS)


def ifft3(spectrum: np.ndarray) -> np.ndarray:
    """Inverse 3D DFT over the last three axes (scaled by 1/N)."""
    return scipy.fft.ifftn(spectrum, axes=(-3, -2, -1), workers=WORKERS)
