# this_file: src/qsmkit/preprocess/__init__.py
"""Phase unwrapping, echo combination and input standardization."""

from qsmkit.preprocess.normalize import (
    NormalizedPhase,
    Standardization,
    combine_magnitude,
    normalize_phase,
    standardization_stats,
    standardize_input,
)
from qsmkit.preprocess.unwrap import unwrap_laplacian, wrap_phase

__all__ = [
    "NormalizedPhase",
    "Standardization",
    "combine_magnitude",
    "normalize_phase",
    "standardization_stats",
    "standardize_input",
    "unwrap_laplacian",
    "wrap_phase",
]
