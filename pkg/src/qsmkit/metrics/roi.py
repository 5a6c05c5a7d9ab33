# this_file: src/qsmkit/metrics/roi.py
"""Per-label region statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qsmkit.core.exceptions import VolumeError
from qsmkit.volume.volume import Mask, Volume3D, require_same_dims


@dataclass(frozen=True)
class RoiStat:
    mean: float
    sd: float
    count: int


def _label_ids(labels: Volume3D) -> np.ndarray:
    ids = np.rint(labels.data)
    if not np.array_equal(ids, labels.data):
        msg = "label volume must be integer-valued"
        raise VolumeError(msg)
    return ids.astype(np.int64)


def roi_stats(volume: Volume3D, labels: Volume3D, mask: Mask | None = None) -> dict[int, RoiStat]:
    """Population mean and SD of ``volume`` for every nonzero label, optionally restricted to ``mask``."""
    require_same_dims(volume, labels)
    ids = _label_ids(labels)
    if mask is not None:
        require_same_dims(volume, mask)
        ids = np.where(mask.bits, ids, 0)
    out: dict[int, RoiStat] = {}
    for label in np.unique(ids):
        if label == 0:
            continue
        values = volume.data[ids == label]
        out[int(label)] = RoiStat(mean=float(values.mean()), sd=float(values.std()), count=int(values.size))
    return out


def roi_error(recon: Volume3D, truth: Volume3D, labels: Volume3D, mask: Mask | None = None) -> dict[int, float]:
    """Absolute difference of ROI means between ``recon`` and ``truth``."""
    got = roi_stats(recon, labels, mask)
    want = roi_stats(truth, labels, mask)
    return {label: abs(got[label].mean - want[label].mean) for label in want}
