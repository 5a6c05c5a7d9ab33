# this_file: src/qsmkit/phantom/signal.py
"""Forward simulation: susceptibility to total field to wrapped multi-echo phase."""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from loguru import logger

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import ConfigError
from qsmkit.preprocess.unwrap import wrap_phase
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import convolve_k, dipole_kernel
from qsmkit.volume.volume import Mask, Volume3D

if TYPE_CHECKING:
    from collections.abc import Sequence

    from qsmkit.core.config import EchoTrain


class Echo(NamedTuple):
    phase: Volume3D
    magnitude: Volume3D


def forward_field(chi: Volume3D, b0_axis: Sequence[float] = (0.0, 0.0, 1.0)) -> Volume3D:
    """Relative field shift (ppm) over the whole FOV produced by ``chi``."""
    kernel = dipole_kernel(KGrid.of(chi), b0_axis)
    field = convolve_k(chi, kernel)
    return field.with_data(field.data, UnitTag.PPM)


def synthesize_echoes(
    delta: Volume3D,
    echoes: EchoTrain,
    snr: float | None = None,
    seed: int = 0,
    support: Mask | None = None,
) -> list[Echo]:
    """Wrapped GRE phase and magnitude for every echo time.

    The magnitude is the ``support`` indicator (all ones without a mask).
    With ``snr`` set, complex Gaussian noise of sigma ``peak / snr`` is added
    before the phase is taken; the draw is fully determined by ``seed``.
    """
    if snr is not None and not snr > 0:
        msg = f"snr must be positive, got {snr}"
        raise ConfigError(msg)
    magnitude = np.ones(delta.dims) if support is None else support.bits.astype(np.float64)
    rng = np.random.default_rng(seed)
    sigma = float(magnitude.max(initial=0.0)) / snr if snr else 0.0
    out = []
    for te in echoes.tes:
        phase = echoes.gamma * echoes.b0 * delta.data * 1e-6 * te
        if sigma > 0:
            signal = magnitude * np.exp(1j * phase)
            signal = signal + rng.normal(0.0, sigma, delta.dims) + 1j * rng.normal(0.0, sigma, delta.dims)
            wrapped, mag = np.angle(signal), np.abs(signal)
        else:
            wrapped, mag = wrap_phase(phase), magnitude
        out.append(
            Echo(
                phase=delta.with_data(wrapped, UnitTag.RADIANS),
                magnitude=delta.with_data(mag, UnitTag.ARBITRARY),
            )
        )
    logger.debug(f"Synthesized {len(out)} echoes (snr={snr}, seed={seed})")
    return out
