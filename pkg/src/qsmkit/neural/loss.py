# this_file: src/qsmkit/neural/loss.py
"""Masked mean-squared error and the full training gradient."""

from __future__ import annotations

import numpy as np

from qsmkit.core.exceptions import ShapeError
from qsmkit.neural.unet import UNetModel, backward_from_output, forward


def loss_masked_mse(pred: np.ndarray, label: np.ndarray, mask: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error over masked voxels and its gradient w.r.t. ``pred``.

    An empty mask gives zero loss and a zero gradient.
    """
    if pred.shape != label.shape or pred.shape != mask.shape:
        msg = f"shape mismatch: pred {pred.shape}, label {label.shape}, mask {mask.shape}"
        raise ShapeError(msg)
    m = np.asarray(mask, dtype=bool)
    count = int(m.sum())
    if count == 0:
        return 0.0, np.zeros_like(pred, dtype=np.float64)
    diff = np.where(m, pred - label, 0.0)
    return float(np.sum(diff**2) / count), 2.0 * diff / count


def backward(
    model: UNetModel,
    patch: np.ndarray,
    label: np.ndarray,
    mask: np.ndarray,
    rng: np.random.Generator | None = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Training-mode forward pass, masked MSE and reverse-mode gradients of every parameter."""
    pred = forward(model, patch, training=True, rng=rng)
    loss, dpred = loss_masked_mse(pred, label, mask)
    backward_from_output(model, dpred)
    return loss, {name: grad.copy() for name, grad in model.gradients().items()}
