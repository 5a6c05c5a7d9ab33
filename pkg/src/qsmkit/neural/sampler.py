# this_file: src/qsmkit/neural/sampler.py
"""Random patch sampling for training."""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from qsmkit.core.constants import MIN_MASK_COVERAGE
from qsmkit.core.exceptions import EmptyMaskError, ShapeError
from qsmkit.preprocess.normalize import Standardization, standardization_stats
from qsmkit.volume.volume import Mask, Volume3D, require_same_dims

if TYPE_CHECKING:
    from collections.abc import Sequence

MAX_TRIES = 10_000


class TrainingPair(NamedTuple):
    psi: Volume3D
    chi: Volume3D
    mask: Mask


class PatchBatch(NamedTuple):
    inputs: np.ndarray
    labels: np.ndarray
    masks: np.ndarray
    origins: list[tuple[int, int, int, int]]


def _check_pairs(pairs: Sequence[TrainingPair], patch_size: int) -> None:
    if not pairs:
        msg = "need at least one training pair"
        raise ShapeError(msg)
    for pair in pairs:
        require_same_dims(pair.psi, pair.chi)
        require_same_dims(pair.psi, pair.mask)
        if min(pair.psi.dims) < patch_size:
            msg = f"volume {pair.psi.dims} is smaller than the {patch_size}^3 patch"
            raise ShapeError(msg)


def sample_patches(
    pairs: Sequence[TrainingPair],
    n: int,
    patch_size: int,
    seed: int | np.random.Generator,
    stats: Standardization | None = None,
    min_coverage: float = MIN_MASK_COVERAGE,
) -> PatchBatch:
    """Draw ``n`` patches with uniform origins and at least ``min_coverage`` of mask.

    Inputs are standardized with ``stats`` or, without it, with each source
    volume's own statistics. Origins are (pair index, x, y, z).

    Raises:
        ShapeError: A volume is smaller than the patch on some axis.
        EmptyMaskError: No admissible origin was found.
    """
    _check_pairs(pairs, patch_size)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = patch_size
    need = min_coverage * p**3
    inputs = np.empty((n, p, p, p))
    labels = np.empty((n, p, p, p))
    masks = np.empty((n, p, p, p), dtype=bool)
    origins = []
    scaled = [(stats or standardization_stats([pair.psi])).apply(pair.psi.data) for pair in pairs]
    for i in range(n):
        for _ in range(MAX_TRIES):
            k = int(rng.integers(len(pairs)))
            pair = pairs[k]
            x, y, z = (int(rng.integers(0, dim - p + 1)) for dim in pair.psi.dims)
            window = (slice(x, x + p), slice(y, y + p), slice(z, z + p))
            mask = pair.mask.bits[window]
            if mask.sum() >= need:
                break
        else:
            msg = f"no patch with {min_coverage:.0%} mask coverage found in {MAX_TRIES} draws"
            raise EmptyMaskError(msg)
        inputs[i] = scaled[k][window]
        labels[i] = pair.chi.data[window]
        masks[i] = mask
        origins.append((k, x, y, z))
    return PatchBatch(inputs, labels, masks, origins)
