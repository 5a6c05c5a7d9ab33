# this_file: src/qsmkit/core/__init__.py
"""Core components for qsmkit."""

from qsmkit.core.config import (
    CgConfig,
    EchoTrain,
    IoConfig,
    PipelineConfig,
    SmvConfig,
    TkdConfig,
    TrainConfig,
    UNetConfig,
    load_pipeline_config,
)
from qsmkit.core.constants import Shape, SkipMode, Susceptibility, UnitTag
from qsmkit.core.exceptions import (
    CheckpointError,
    ConfigError,
    NumericalError,
    QsmError,
    VolumeError,
    VolumeFormatError,
)

__all__ = [
    "CgConfig",
    "CheckpointError",
    "ConfigError",
    "EchoTrain",
    "IoConfig",
    "NumericalError",
    "PipelineConfig",
    "QsmError",
    "Shape",
    "SkipMode",
    "SmvConfig",
    "Susceptibility",
    "TkdConfig",
    "TrainConfig",
    "UNetConfig",
    "UnitTag",
    "VolumeError",
    "VolumeFormatError",
    "load_pipeline_config",
]
