# this_file: src/qsmkit/neural/optim.py
"""Adam with bias correction and the step-wise decayed learning rate."""

from __future__ import annotations

import numpy as np

from qsmkit.core.config import TrainConfig
from qsmkit.neural.unet import UNetModel


def adam_step(model: UNetModel, grads: dict[str, np.ndarray], t: int, cfg: TrainConfig) -> UNetModel:
    """Apply one Adam update in place at step ``t`` (1-based)."""
    if t < 1:
        msg = f"Adam steps are 1-based, got t={t}"
        raise ValueError(msg)
    lr = cfg.learning_rate(t)
    b1, b2 = cfg.beta1, cfg.beta2
    params = model.parameters()
    for name, g in grads.items():
        m = model.adam_m.get(name)
        v = model.adam_v.get(name)
        m = (1 - b1) * g if m is None else b1 * m + (1 - b1) * g
        v = (1 - b2) * g * g if v is None else b2 * v + (1 - b2) * g * g
        model.adam_m[name], model.adam_v[name] = m, v
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        params[name] -= lr * m_hat / (np.sqrt(v_hat) + cfg.eps)
    model.step = t
    return model
