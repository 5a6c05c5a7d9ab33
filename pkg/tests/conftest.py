# this_file: tests/conftest.py
"""Pytest fixtures for the test suite."""

import os

import numpy as np
import pytest

from qsmkit.core.config import UNetConfig
from qsmkit.phantom.builder import build_phantom
from qsmkit.phantom.spec import default_phantom_spec
from qsmkit.volume.volume import Mask


def pytest_collection_modifyitems(config, items):
    """Skip slow acceptance runs unless QSMKIT_RUN_SLOW=1."""
    if os.environ.get("QSMKIT_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set QSMKIT_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def default_phantom():
    """The default 64^3 head, built once."""
    return build_phantom(default_phantom_spec())


@pytest.fixture
def tiny_unet_config():
    """Smallest useful network: depth 2, two base channels, 8^3 patches, no dropout."""
    return UNetConfig(depth=2, base_channels=2, patch_size=8, dropout_rate=0.0)


def ball_mask(dims, radius, center=None):
    """Digital ball |x - c|^2 <= r^2 on a voxel grid."""
    center = [n // 2 for n in dims] if center is None else center
    x, y, z = np.meshgrid(*(np.arange(n) - c for n, c in zip(dims, center)), indexing="ij")
    return Mask(x**2 + y**2 + z**2 <= radius**2)


def brute_force_erode(bits, r):
    """Keep voxels whose every neighbour within distance r is inside ``bits``; off-grid counts as outside."""
    padded = np.pad(bits, r, mode="constant", constant_values=False)
    out = np.ones(bits.shape, dtype=bool)
    n = bits.shape
    for dx in range(-r, r + 1):
        for dy in range(-r, r + 1):
            for dz in range(-r, r + 1):
                if dx * dx + dy * dy + dz * dz > r * r:
                    continue
                out &= padded[r + dx : r + dx + n[0], r + dy : r + dy + n[1], r + dz : r + dz + n[2]]
    return out


@pytest.fixture
def make_ball():
    return ball_mask


@pytest.fixture
def erode_reference():
    return brute_force_erode
