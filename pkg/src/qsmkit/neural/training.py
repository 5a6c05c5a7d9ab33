# this_file: src/qsmkit/neural/training.py
"""Training loop with best-validation model selection."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from qsmkit.core.config import TrainConfig, UNetConfig
from qsmkit.core.exceptions import ConfigError, NonFiniteLossError
from qsmkit.neural.loss import backward, loss_masked_mse
from qsmkit.neural.optim import adam_step
from qsmkit.neural.sampler import PatchBatch, TrainingPair, sample_patches
from qsmkit.neural.unet import UNetModel, build_unet, forward
from qsmkit.preprocess.normalize import standardization_stats

if TYPE_CHECKING:
    from collections.abc import Sequence


@dataclass
class EpochLoss:
    epoch: int
    train: float
    validation: float
    learning_rate: float


@dataclass
class TrainResult:
    model: UNetModel
    history: list[EpochLoss] = field(default_factory=list)
    initial_validation: float = float("nan")
    best_epoch: int = 0

    @property
    def best_validation(self) -> float:
        if self.best_epoch == 0:
            return self.initial_validation
        return self.history[self.best_epoch - 1].validation


def validation_loss(model: UNetModel, batch: PatchBatch, batch_size: int) -> float:
    """Masked MSE of the inference-mode model, pooled over all voxels of ``batch``."""
    total, count = 0.0, 0
    for start in range(0, len(batch.inputs), batch_size):
        part = slice(start, start + batch_size)
        pred = forward(model, batch.inputs[part], training=False)
        n = int(batch.masks[part].sum())
        loss, _ = loss_masked_mse(pred, batch.labels[part], batch.masks[part])
        total += loss * n
        count += n
    return total / count if count else 0.0


def zero_predictor_loss(batch: PatchBatch) -> float:
    """Masked MSE of predicting 0 ppm everywhere."""
    loss, _ = loss_masked_mse(np.zeros_like(batch.labels), batch.labels, batch.masks)
    return loss


def train(
    pairs: Sequence[TrainingPair],
    validation: Sequence[TrainingPair],
    ucfg: UNetConfig | None = None,
    tcfg: TrainConfig | None = None,
) -> TrainResult:
    """Fit a U-net on random patches and return the best-validation model.

    Input standardization is pooled over the training volumes and stored in
    the model. Every draw derives from ``tcfg.seed``.

    Raises:
        NonFiniteLossError: A training step produced NaN or Inf.
    """
    ucfg = ucfg or UNetConfig()
    tcfg = tcfg or TrainConfig()
    if not validation:
        msg = "training needs at least one held-out validation pair"
        raise ConfigError(msg)
    steps_per_epoch = max(1, math.ceil(len(pairs) * tcfg.patches_per_volume / tcfg.batch_size))
    tcfg = tcfg.resolved(steps_per_epoch)
    stats = standardization_stats([pair.psi for pair in pairs])
    model = build_unet(ucfg, seed=tcfg.seed)
    model.stats = stats

    rng = np.random.default_rng(tcfg.seed)
    val_batch = sample_patches(
        validation,
        tcfg.validation_patches * len(validation),
        ucfg.patch_size,
        np.random.default_rng([tcfg.seed, 1]),
        stats,
    )
    result = TrainResult(model=copy.deepcopy(model), initial_validation=validation_loss(model, val_batch, tcfg.batch_size))
    best = result.initial_validation
    logger.info(
        f"Training {len(pairs)} volumes, {steps_per_epoch} steps/epoch, lr decay {tcfg.lr_decay:.4g}; "
        f"initial validation {best:.5f}"
    )

    t = 0
    for epoch in range(1, tcfg.epochs + 1):
        losses = []
        for _ in range(steps_per_epoch):
            batch = sample_patches(pairs, tcfg.batch_size, ucfg.patch_size, rng, stats)
            loss, grads = backward(model, batch.inputs, batch.labels, batch.masks, rng)
            if not np.isfinite(loss):
                msg = f"non-finite training loss at epoch {epoch}, step {t + 1}"
                raise NonFiniteLossError(msg)
            t += 1
            adam_step(model, grads, t, tcfg)
            losses.append(loss)
        val = validation_loss(model, val_batch, tcfg.batch_size)
        entry = EpochLoss(epoch, float(np.mean(losses)), val, tcfg.learning_rate(t))
        result.history.append(entry)
        logger.info(f"epoch {epoch}: train {entry.train:.5f} validation {val:.5f} lr {entry.learning_rate:.2e}")
        if val < best:
            best = val
            result.best_epoch = epoch
            result.model = copy.deepcopy(model)
    return result
