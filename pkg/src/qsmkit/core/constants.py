# this_file: src/qsmkit/core/constants.py
"""Constants and enums for qsmkit."""

from enum import Enum, IntEnum


class UnitTag(IntEnum):
    """Physical unit carried by a volume (stored as u16 in raw files)."""

    PPM = 0
    RADIANS = 1
    DIMENSIONLESS = 2
    ARBITRARY = 3


class SkipMode(str, Enum):
    """How decoder levels merge the encoder features."""

    CONCAT = "concat"
    ADD = "add"


class Shape(str, Enum):
    """Phantom structure primitives."""

    SPHERE = "sphere"
    ELLIPSOID = "ellipsoid"
    BOX = "box"


class Susceptibility:
    """Reference susceptibility values (ppm) of the numerical head phantom."""

    HIPPOCAMPUS = 0.05
    HYPOTHALAMUS = 0.05
    MEDULLA = 0.05
    WHITE_MATTER = -0.03
    CEREBELLUM = -0.0065
    PONS = -0.0065
    THALAMUS = -0.0065
    MIDBRAIN = -0.0065
    CSF = 0.0
    SKULL = -2.1
    FAT = 0.6
    AIR = 9.2


# Physics
GAMMA = 2.675e8  # rad/s/T
DEFAULT_B0 = 3.0  # T
DEFAULT_TE_FIRST = 5.468e-3  # s
DEFAULT_TE_SPACING = 3.0e-3  # s
DEFAULT_N_ECHOES = 8

# File formats
RAW_MAGIC = b"QSMV"
RAW_VERSION = 1
CHECKPOINT_MAGIC = b"QSMN"
CHECKPOINT_VERSION = 1
NIFTI_MAGIC = b"n+1"
NIFTI_FLOAT32 = 16
NIFTI_INT16 = 4

# Evaluation filters
HFEN_SIGMA = 1.5
HFEN_SUPPORT = 15
SSIM_SIGMA = 1.5
SSIM_SUPPORT = 11
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# Display
DEFAULT_WINDOW = (-0.15, 0.25)  # ppm

# Learning
LR_FLOOR = 1e-7
MIN_MASK_COVERAGE = 0.2
