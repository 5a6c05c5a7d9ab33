# this_file: src/qsmkit/preprocess/unwrap.py
"""Laplacian-based phase unwrapping."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from loguru import logger
from scipy import ndimage, sparse
from scipy.sparse.linalg import cg

from qsmkit.core.constants import UnitTag
from qsmkit.core.exceptions import NumericalError
from qsmkit.spectral.grid import KGrid
from qsmkit.spectral.kernels import convolve_array, laplacian_kernel
from qsmkit.volume.volume import Volume3D, require_same_dims

if TYPE_CHECKING:
    from qsmkit.volume.volume import Mask

POISSON_RTOL = 1e-10


def wrap_phase(phase: np.ndarray) -> np.ndarray:
    """Fold phase into (-pi, pi]."""
    return phase - 2.0 * np.pi * np.ceil((phase - np.pi) / (2.0 * np.pi))


def _spectral_unwrap(wrapped: Volume3D) -> np.ndarray:
    lap = laplacian_kernel(KGrid.of(wrapped))
    inverse = lap.pseudo_inverse()
    c, s = np.cos(wrapped.data), np.sin(wrapped.data)
    source = c * convolve_array(s, lap) - s * convolve_array(c, lap)
    omega = convolve_array(source, inverse)
    shift = float(np.median(wrap_phase(wrapped.data - omega)))
    logger.debug(f"Laplacian unwrap on {wrapped.dims}: constant shift {shift:.4f} rad")
    return omega + shift


def _masked_poisson(wrapped: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Least-squares phase from wrapped neighbour differences inside ``bits``.

    Solves the graph Laplacian system of the mask (Neumann at its border)
    with conjugate gradients; each connected component is fixed only up to
    a constant.
    """
    n = int(bits.sum())
    index = np.full(bits.shape, -1, dtype=np.int64)
    index[bits] = np.arange(n)
    rhs = np.zeros(n)
    heads, tails = [], []
    for axis in range(3):
        lo = tuple(slice(None, -1) if a == axis else slice(None) for a in range(3))
        hi = tuple(slice(1, None) if a == axis else slice(None) for a in range(3))
        both = bits[lo] & bits[hi]
        p, q = index[lo][both], index[hi][both]
        d = wrap_phase(wrapped[hi] - wrapped[lo])[both]
        rhs += np.bincount(q, weights=d, minlength=n) - np.bincount(p, weights=d, minlength=n)
        heads.append(p)
        tails.append(q)
    p, q = np.concatenate(heads), np.concatenate(tails)
    adjacency = sparse.coo_matrix((np.ones(p.size), (p, q)), shape=(n, n)).tocsr()
    adjacency = adjacency + adjacency.T
    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    laplacian = sparse.diags(degree) - adjacency
    jacobi = sparse.diags(1.0 / np.maximum(degree, 1.0))
    solution, info = cg(laplacian, rhs, rtol=POISSON_RTOL, atol=0.0, M=jacobi)
    if info != 0:
        msg = f"masked Poisson solve did not converge ({info} iterations)"
        raise NumericalError(msg)
    out = np.zeros(bits.shape)
    out[bits] = solution
    return out


def unwrap_laplacian(wrapped: Volume3D, mask: Mask | None = None) -> Volume3D:
    """Unwrap phase with the Fourier Laplacian identity.

    The k=0 mode is lost by the Laplacian; the constant is restored by shifting
    the result so that its median wrapped offset from the input is zero.

    With ``mask``, voxels inside it are instead solved from wrapped neighbour
    differences restricted to the mask, which is exact up to one constant per
    connected component whenever true neighbour steps stay below pi. Each
    component is then made congruent to the input modulo 2 pi, taking the
    multiple of 2 pi closest to the whole-FOV estimate. Voxels outside the
    mask keep the whole-FOV estimate.
    """
    omega = _spectral_unwrap(wrapped)
    if mask is None or mask.is_empty:
        return wrapped.with_data(omega, UnitTag.RADIANS)
    require_same_dims(wrapped, mask)
    bits = mask.bits
    local = _masked_poisson(wrapped.data, bits)
    components, count = ndimage.label(bits)
    for label in range(1, count + 1):
        part = components == label
        local[part] += float(np.angle(np.mean(np.exp(1j * (wrapped.data[part] - local[part])))))
        local[part] += 2.0 * np.pi * np.round(np.mean(omega[part] - local[part]) / (2.0 * np.pi))
    snapped = wrapped.data + 2.0 * np.pi * np.round((local - wrapped.data) / (2.0 * np.pi))
    logger.debug(f"Masked unwrap over {int(bits.sum())} voxels in {count} component(s)")
    return wrapped.with_data(np.where(bits, snapped, omega), UnitTag.RADIANS)
