# this_file: src/qsmkit/neural/__init__.py
"""From-scratch 3D U-net: layers, training and patch-wise prediction."""

from qsmkit.neural.checkpoint import load_checkpoint, save_checkpoint
from qsmkit.neural.loss import backward, loss_masked_mse
from qsmkit.neural.optim import adam_step
from qsmkit.neural.predict import blend_window, mask_for_display, predict_volume, tile_origins
from qsmkit.neural.sampler import PatchBatch, TrainingPair, sample_patches
from qsmkit.neural.training import EpochLoss, TrainResult, train, validation_loss, zero_predictor_loss
from qsmkit.neural.unet import UNetModel, backward_from_output, build_unet, forward

__all__ = [
    "EpochLoss",
    "PatchBatch",
    "TrainResult",
    "TrainingPair",
    "UNetModel",
    "adam_step",
    "backward",
    "backward_from_output",
    "blend_window",
    "build_unet",
    "forward",
    "load_checkpoint",
    "loss_masked_mse",
    "mask_for_display",
    "predict_volume",
    "sample_patches",
    "save_checkpoint",
    "tile_origins",
    "train",
    "validation_loss",
    "zero_predictor_loss",
]
