# this_file: src/qsmkit/phantom/__init__.py
"""Synthetic head phantoms and forward signal simulation."""

from qsmkit.phantom.builder import Phantom, build_phantom, voxel_coordinates, zero_background, zero_brain
from qsmkit.phantom.signal import Echo, forward_field, synthesize_echoes
from qsmkit.phantom.spec import PhantomSpec, Structure, default_phantom_spec, random_phantom_spec

__all__ = [
    "Echo",
    "Phantom",
    "PhantomSpec",
    "Structure",
    "build_phantom",
    "default_phantom_spec",
    "forward_field",
    "random_phantom_spec",
    "synthesize_echoes",
    "voxel_coordinates",
    "zero_background",
    "zero_brain",
]
