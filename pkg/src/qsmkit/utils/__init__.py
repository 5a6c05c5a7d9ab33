# this_file: src/qsmkit/utils/__init__.py
"""Utility components for qsmkit."""

from qsmkit.utils.imaging import emit_slices, window_to_uint8
from qsmkit.utils.logging import setup_logging
from qsmkit.utils.storage import ArtifactManifest, file_digest

__all__ = [
    "ArtifactManifest",
    "emit_slices",
    "file_digest",
    "setup_logging",
    "window_to_uint8",
]
