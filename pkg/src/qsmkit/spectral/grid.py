# this_file: src/qsmkit/spectral/grid.py
"""Physical frequency grids in standard DFT order."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from qsmkit.core.exceptions import KernelError
from qsmkit.volume.volume import Dims, Volume3D, VoxelSize


@dataclass(frozen=True)
class KGrid:
    """Frequency coordinates (cycles/mm) of a volume grid; k=0 sits at index (0, 0, 0).

    Each axis follows DFT order (0, +f, ..., -f). For even lengths the Nyquist
    bin is its own mirror, so kernels are built from k**2 only.
    """

    dims: Dims
    voxel_size: VoxelSize = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        if len(self.dims) != 3 or min(self.dims) < 1:
            msg = f"invalid grid dims {self.dims}"
            raise KernelError(msg)

    @classmethod
    def of(cls, volume: Volume3D) -> KGrid:
        return cls(volume.dims, volume.voxel_size)

    @cached_property
    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-axis frequencies kx, ky, kz."""
        kx, ky, kz = (np.fft.fftfreq(n, d=d) for n, d in zip(self.dims, self.voxel_size))
        return kx, ky, kz

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        kx, ky, kz = self.axes
        return np.meshgrid(kx, ky, kz, indexing="ij")

    @cached_property
    def k2(self) -> np.ndarray:
        """Squared frequency magnitude |k|**2."""
        kx, ky, kz = self.axes
        return kx[:, None, None] ** 2 + ky[None, :, None] ** 2 + kz[None, None, :] ** 2

    def offsets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Signed image-space voxel offsets from the origin, wrapped to DFT order."""
        ix, iy, iz = (np.fft.fftfreq(n, d=1.0 / n) for n in self.dims)
        return np.meshgrid(ix, iy, iz, indexing="ij")
