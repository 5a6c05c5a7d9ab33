# this_file: tests/test_core/test_exceptions.py
"""Tests for the exception hierarchy."""

import pytest

from qsmkit.core import exceptions as exc


@pytest.mark.parametrize(
    ("error", "parent"),
    [
        (exc.BadMagicError, exc.VolumeFormatError),
        (exc.TruncatedPayloadError, exc.VolumeFormatError),
        (exc.UnsupportedDatatypeError, exc.VolumeFormatError),
        (exc.VolumeFormatError, exc.VolumeError),
        (exc.EmptyMaskError, exc.VolumeError),
        (exc.ThinMaskError, exc.NumericalError),
        (exc.ZeroVarianceError, exc.NumericalError),
        (exc.SolverDivergenceError, exc.NumericalError),
        (exc.NonFiniteLossError, exc.NumericalError),
        (exc.CheckpointError, exc.QsmError),
        (exc.ConfigError, exc.QsmError),
    ],
)
def test_hierarchy(error, parent):
    """Verify that every error can be caught by its family and by QsmError."""
    assert issubclass(error, parent)
    assert issubclass(error, exc.QsmError)


def test_message_preserved():
    """Verify that the message survives raising."""
    with pytest.raises(exc.QsmError, match="bad magic"):
        raise exc.BadMagicError("bad magic b'XXXX'")
