# this_file: src/qsmkit/inversion/__init__.py
"""Dipole inversion baselines: TKD and masked CG-Tikhonov."""

from qsmkit.inversion.cg import CgResult, gradient, gradient_adjoint, invert_cg, solve_cgls
from qsmkit.inversion.tkd import invert_tkd, tkd_multiplier

__all__ = ["CgResult", "gradient", "gradient_adjoint", "invert_cg", "invert_tkd", "solve_cgls", "tkd_multiplier"]
