# this_file: src/qsmkit/core/exceptions.py
"""Custom exceptions for qsmkit."""


class QsmError(Exception):
    """Base exception for all qsmkit errors."""


class ConfigError(QsmError):
    """Invalid configuration values or config files."""


class VolumeError(QsmError):
    """Volume and mask construction errors."""


class DimensionMismatchError(VolumeError):
    """Two operands do not share the same grid."""


class EmptyMaskError(VolumeError):
    """A mask with no voxels was passed where support is required."""


class VolumeFormatError(VolumeError):
    """On-disk volume files that cannot be decoded."""


class BadMagicError(VolumeFormatError):
    """File does not start with the expected magic bytes."""


class DimensionOverflowError(VolumeFormatError):
    """Header dimensions are zero or describe an impossible payload."""


class TruncatedPayloadError(VolumeFormatError):
    """File ends before the payload announced by its header."""


class UnsupportedDatatypeError(VolumeFormatError):
    """NIfTI datatype code outside the supported set."""


class DimensionalityError(VolumeFormatError):
    """NIfTI file holds more than one 3D frame."""


class KernelError(QsmError):
    """Spectral kernel construction errors."""


class PhantomError(QsmError):
    """Phantom specification or construction errors."""


class EchoCountError(QsmError):
    """Number of phase volumes does not match the echo train."""


class ShapeError(QsmError):
    """Volume or patch shape incompatible with a network or filter window."""


class CheckpointError(QsmError):
    """Model checkpoint files that cannot be decoded."""


class NumericalError(QsmError):
    """Failures of numerical procedures."""


class ZeroVarianceError(NumericalError):
    """Standardization of a constant volume."""


class ZeroNormError(NumericalError):
    """Relative metric against a reference with zero norm."""


class ThinMaskError(NumericalError):
    """Mask admits no voxel at the minimum SMV radius."""


class SolverDivergenceError(NumericalError):
    """Iterative solver residual blew up."""


class NonFiniteLossError(NumericalError):
    """Training produced a NaN or infinite loss."""
