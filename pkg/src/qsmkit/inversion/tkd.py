# this_file: src/qsmkit/inversion/tkd.py
"""Truncated k-space division."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from qsmkit.core.config import TkdConfig
from qsmkit.core.constants import UnitTag
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import KSpaceKernel, convolve_k, dipole_kernel

if TYPE_CHECKING:
    from collections.abc import Sequence

    from qsmkit.volume.volume import Volume3D


def tkd_multiplier(dipole: KSpaceKernel, cfg: TkdConfig) -> KSpaceKernel:
    """1/D where |D| >= t; 1/(sign(D) t) below, or 0 with ``zero_subthreshold``."""
    d = dipole.values
    t = cfg.threshold
    out = np.zeros_like(d)
    passband = np.abs(d) >= t
    out[passband] = 1.0 / d[passband]
    below = ~passband & (d != 0)
    if not cfg.zero_subthreshold:
        out[below] = np.sign(d[below]) / t
    return KSpaceKernel(out)


def invert_tkd(
    local: Volume3D, cfg: TkdConfig | None = None, b0_axis: Sequence[float] = (0.0, 0.0, 1.0)
) -> Volume3D:
    """Susceptibility from a field map by thresholded dipole division."""
    cfg = cfg or TkdConfig()
    multiplier = tkd_multiplier(dipole_kernel(KGrid.of(local), b0_axis), cfg)
    chi = convolve_k(local, multiplier)
    return chi.with_data(chi.data, UnitTag.PPM)
