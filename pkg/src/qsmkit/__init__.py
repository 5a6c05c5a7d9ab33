# this_file: src/qsmkit/__init__.py
"""qsmkit - quantitative susceptibility mapping from synthetic phantoms to a learned single-step inversion."""

try:
    from qsmkit.__version__ import __version__
except ImportError:
    __version__ = "0.0.0"  # Default version when not installed

from qsmkit.api import run_pipeline, simulate, train_model

__all__ = ["__version__", "run_pipeline", "simulate", "train_model"]
