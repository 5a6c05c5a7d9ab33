# this_file: src/qsmkit/preprocess/normalize.py
"""Echo combination into the normalized total phase, and input standardization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import EchoCountError, ZeroVarianceError
from qsmkit.volume.volume import Volume3D, require_same_dims

if TYPE_CHECKING:
    from collections.abc import Sequence

    from qsmkit.core.config import EchoTrain


@dataclass(frozen=True)
class NormalizedPhase:
    """Total field shift psi (ppm) with the acquisition it was derived from."""

    psi: Volume3D
    n_echoes: int
    b0: float
    sum_te: float

    def __post_init__(self) -> None:
        if self.psi.unit is not UnitTag.PPM:
            object.__setattr__(self, "psi", self.psi.with_data(self.psi.data, UnitTag.PPM))

    @classmethod
    def from_volume(cls, psi: Volume3D) -> NormalizedPhase:
        """Wrap a field map read from disk; provenance is unknown."""
        return cls(psi, n_echoes=0, b0=float("nan"), sum_te=float("nan"))


@dataclass(frozen=True)
class Standardization:
    """Affine map x -> (x - mean) / std."""

    mean: float
    std: float

    def apply(self, data: np.ndarray) -> np.ndarray:
        return (data - self.mean) / self.std

    def invert(self, data: np.ndarray) -> np.ndarray:
        return data * self.std + self.mean


def normalize_phase(unwrapped: Sequence[Volume3D], echoes: EchoTrain) -> NormalizedPhase:
    """psi = sum(omega_i) / (gamma * B0 * sum(TE_i)) * 1e6, in ppm."""
    if len(unwrapped) != echoes.n_echoes:
        msg = f"got {len(unwrapped)} phase volumes for {echoes.n_echoes} echo times"
        raise EchoCountError(msg)
    first = unwrapped[0]
    total = np.zeros(first.dims)
    for phase in unwrapped:
        require_same_dims(first, phase)
        total += phase.data
    psi = total / (echoes.gamma * echoes.b0 * echoes.sum_te) * 1e6
    return NormalizedPhase(
        psi=first.with_data(psi, UnitTag.PPM),
        n_echoes=echoes.n_echoes,
        b0=echoes.b0,
        sum_te=echoes.sum_te,
    )


def standardization_stats(volumes: Sequence[Volume3D | NormalizedPhase]) -> Standardization:
    """Mean and population SD pooled over every voxel of ``volumes``."""
    arrays = [(v.psi if isinstance(v, NormalizedPhase) else v).data.ravel() for v in volumes]
    data = np.concatenate(arrays)
    std = float(data.std())
    if np.ptp(data) == 0 or std == 0:
        msg = "cannot standardize a constant input"
        raise ZeroVarianceError(msg)
    return Standardization(mean=float(data.mean()), std=std)


def standardize_input(
    psi: NormalizedPhase | Volume3D, stats: Standardization | None = None
) -> tuple[Volume3D, Standardization]:
    """Zero-mean, unit-SD rescale over the full FOV.

    Precomputed ``stats`` (e.g. those a model was trained with) are applied
    instead of the volume's own statistics.

    Raises:
        ZeroVarianceError: The input is constant.
    """
    volume = psi.psi if isinstance(psi, NormalizedPhase) else psi
    stats = stats or standardization_stats([volume])
    return volume.with_data(stats.apply(volume.data), UnitTag.DIMENSIONLESS), stats


def combine_magnitude(magnitudes: Sequence[Volume3D]) -> Volume3D:
    """Sum of squared echo magnitudes."""
    if not magnitudes:
        msg = "need at least one magnitude volume"
        raise EchoCountError(msg)
    first = magnitudes[0]
    total = np.zeros(first.dims)
    for magnitude in magnitudes:
        require_same_dims(first, magnitude)
        total += magnitude.data**2
    return first.with_data(total, UnitTag.ARBITRARY)
