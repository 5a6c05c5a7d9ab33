# this_file: src/qsmkit/inversion/cg.py
"""Masked Tikhonov dipole inversion solved with CGLS.

Minimizes ||M (D chi - delta)||^2 + lambda ||grad chi||^2, where grad is the
periodic forward difference. Used as the iterative baseline in comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from qsmkit.core.config import CgConfig
from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import EmptyMaskError, SolverDivergenceError
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import convolve_array, dipole_kernel
from qsmkit.volume.volume import Mask, Volume3D, require_same_dims

if TYPE_CHECKING:
    from collections.abc import Sequence

DIVERGENCE_FACTOR = 10.0


@dataclass
class CgResult:
    chi: Volume3D
    residuals: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def gradient(x: np.ndarray, voxel_size: Sequence[float]) -> np.ndarray:
    """Periodic forward differences stacked on a leading axis of length 3."""
    return np.stack([(np.roll(x, -1, axis=a) - x) / voxel_size[a] for a in range(3)])


def gradient_adjoint(g: np.ndarray, voxel_size: Sequence[float]) -> np.ndarray:
    return sum((np.roll(g[a], 1, axis=a) - g[a]) / voxel_size[a] for a in range(3))


def solve_cgls(
    local: Volume3D, mask: Mask, cfg: CgConfig | None = None, b0_axis: Sequence[float] = (0.0, 0.0, 1.0)
) -> CgResult:
    """Run CGLS on the stacked system [M D; sqrt(lambda) grad] chi = [M delta; 0].

    The least-squares residual is recorded once per iteration and never grows.

    Raises:
        EmptyMaskError: ``mask`` selects nothing.
        SolverDivergenceError: The residual exceeds ten times its initial value
            or stops being finite.
    """
    cfg = cfg or CgConfig()
    require_same_dims(local, mask)
    if mask.is_empty:
        msg = "CG inversion needs a non-empty mask"
        raise EmptyMaskError(msg)
    m = mask.bits.astype(np.float64)
    dipole = dipole_kernel(KGrid.of(local), b0_axis)
    vs = local.voxel_size
    root_lam = float(np.sqrt(cfg.lam))

    def forward(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return m * convolve_array(x, dipole), root_lam * gradient(x, vs)

    def adjoint(r_data: np.ndarray, r_reg: np.ndarray) -> np.ndarray:
        return convolve_array(m * r_data, dipole) + root_lam * gradient_adjoint(r_reg, vs)

    x = np.zeros(local.dims)
    r_data = m * local.data
    r_reg = np.zeros((3, *local.dims))
    s = adjoint(r_data, r_reg)
    p = s.copy()
    gamma = float(np.vdot(s, s))
    gamma0 = gamma
    res0 = float(np.sqrt(np.vdot(r_data, r_data)))
    result = CgResult(chi=local.with_data(x, UnitTag.PPM), residuals=[res0])
    if gamma0 == 0:
        result.converged = True
        return result

    for it in range(1, cfg.max_iters + 1):
        q_data, q_reg = forward(p)
        qq = float(np.vdot(q_data, q_data) + np.vdot(q_reg, q_reg))
        if qq == 0:
            break
        alpha = gamma / qq
        x += alpha * p
        r_data -= alpha * q_data
        r_reg -= alpha * q_reg
        res = float(np.sqrt(np.vdot(r_data, r_data) + np.vdot(r_reg, r_reg)))
        result.residuals.append(res)
        result.iterations = it
        if not np.isfinite(res) or res > DIVERGENCE_FACTOR * res0:
            msg = f"CG diverged at iteration {it}: residual {res:.3e} vs initial {res0:.3e}"
            raise SolverDivergenceError(msg)
        s = adjoint(r_data, r_reg)
        gamma_new = float(np.vdot(s, s))
        logger.debug(f"CG iter {it}: residual {res:.4e}, normal residual {np.sqrt(gamma_new / gamma0):.3e}")
        if np.sqrt(gamma_new / gamma0) <= cfg.rtol:
            result.converged = True
            break
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new

    result.chi = local.with_data(x, UnitTag.PPM)
    if not result.converged:
        logger.info(f"CG stopped after {result.iterations} iterations without reaching rtol={cfg.rtol}")
    return result


def invert_cg(
    local: Volume3D, mask: Mask, cfg: CgConfig | None = None, b0_axis: Sequence[float] = (0.0, 0.0, 1.0)
) -> Volume3D:
    """Susceptibility estimate of the masked CG-Tikhonov solver."""
    return solve_cgls(local, mask, cfg, b0_axis).chi
