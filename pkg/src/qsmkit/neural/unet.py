# this_file: src/qsmkit/neural/unet.py
"""3D U-net built from the explicit layers, with forward and backward passes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qsmkit.core.config import UNetConfig
from qsmkit.core.constants import SkipMode
from qsmkit.core.exceptions import ShapeError
from qsmkit.neural.layers import BatchNorm, Conv3D, DownConv, Dropout, Layer, ReLU, Sequential, UpConv
from qsmkit.preprocess.normalize import Standardization


def _conv_block(c_in: int, c_out: int, cfg: UNetConfig, rng: np.random.Generator, dropout: bool) -> Sequential:
    layers: list[Layer] = []
    for c in (c_in, c_out):
        layers += [Conv3D(c, c_out, 3, rng), BatchNorm(c_out, cfg.bn_momentum, cfg.bn_eps), ReLU()]
    if dropout:
        layers.append(Dropout(cfg.dropout_rate))
    return Sequential(layers)


@dataclass
class UNetModel:
    """Weights, batch-norm statistics and bookkeeping of one U-net."""

    config: UNetConfig
    encoders: list[Sequential]
    downs: list[Sequential]
    bottleneck: Sequential
    ups: list[UpConv]
    decoders: list[Sequential]
    head: Conv3D
    stats: Standardization | None = None
    step: int = 0
    adam_m: dict[str, np.ndarray] = field(default_factory=dict)
    adam_v: dict[str, np.ndarray] = field(default_factory=dict)

    def named_layers(self) -> list[tuple[str, Layer]]:
        """Every leaf layer with a stable dotted name, in construction order."""
        out: list[tuple[str, Layer]] = []
        stages: list[tuple[str, Layer]] = []
        for level in range(self.config.depth):
            stages += [(f"enc{level}", self.encoders[level]), (f"down{level}", self.downs[level])]
        stages.append(("mid", self.bottleneck))
        for level in reversed(range(self.config.depth)):
            stages += [(f"up{level}", self.ups[level]), (f"dec{level}", self.decoders[level])]
        stages.append(("head", self.head))
        for prefix, stage in stages:
            if isinstance(stage, Sequential):
                out += [(f"{prefix}.{name}", layer) for name, layer in stage.named_layers()]
            else:
                out.append((prefix, stage))
        return out

    def parameters(self) -> dict[str, np.ndarray]:
        return {f"{n}.{k}": v for n, layer in self.named_layers() for k, v in layer.params.items()}

    def gradients(self) -> dict[str, np.ndarray]:
        return {f"{n}.{k}": v for n, layer in self.named_layers() for k, v in layer.grads.items()}

    def buffers(self) -> dict[str, np.ndarray]:
        return {f"{n}.{k}": v for n, layer in self.named_layers() for k, v in layer.buffers.items()}

    def set_tensor(self, name: str, value: np.ndarray) -> None:
        """Replace one parameter or buffer by its dotted name."""
        layer_name, _, key = name.rpartition(".")
        layer = dict(self.named_layers())[layer_name]
        target = layer.params if key in layer.params else layer.buffers
        if key not in target:
            msg = f"unknown tensor {name}"
            raise KeyError(msg)
        if target[key].shape != value.shape:
            msg = f"{name}: shape {value.shape} does not match {target[key].shape}"
            raise ShapeError(msg)
        target[key] = np.array(value, dtype=np.float64)

    @property
    def conv_layers(self) -> list[Conv3D]:
        return [layer for _, layer in self.named_layers() if isinstance(layer, Conv3D)]

    @property
    def max_width(self) -> int:
        return max(conv.params["weight"].shape[-1] for conv in self.conv_layers)


def build_unet(cfg: UNetConfig, seed: int = 0) -> UNetModel:
    """He-initialized U-net; identical seeds give bit-identical weights.

    Each encoder level holds two 3x3x3 conv/BN/ReLU units followed by a
    stride-2 down-convolution with ReLU. The bottleneck and every decoder level
    hold two units and dropout; decoders open with a stride-2 transposed
    convolution and a skip merge. A 1x1x1 convolution produces the output.
    """
    rng = np.random.default_rng(seed)
    widths = cfg.widths
    depth = cfg.depth
    encoders, downs = [], []
    c_in = 1
    for level in range(depth):
        encoders.append(_conv_block(c_in, widths[level], cfg, rng, dropout=False))
        downs.append(Sequential([DownConv(widths[level], widths[level + 1], rng), ReLU()]))
        c_in = widths[level + 1]
    bottleneck = _conv_block(widths[depth], widths[depth], cfg, rng, dropout=True)
    ups: list[UpConv] = [None] * depth  # type: ignore[list-item]
    decoders: list[Sequential] = [None] * depth  # type: ignore[list-item]
    for level in reversed(range(depth)):
        ups[level] = UpConv(widths[level + 1], widths[level], rng)
        merged = 2 * widths[level] if cfg.skip_mode is SkipMode.CONCAT else widths[level]
        decoders[level] = _conv_block(merged, widths[level], cfg, rng, dropout=True)
    head = Conv3D(widths[0], 1, 1, rng)
    return UNetModel(cfg, encoders, downs, bottleneck, ups, decoders, head)


def _as_batch(patch: np.ndarray, depth: int) -> tuple[np.ndarray, bool]:
    squeeze = patch.ndim == 3
    batch = patch[None] if squeeze else patch
    if batch.ndim != 4:
        msg = f"expected (X, Y, Z) or (N, X, Y, Z) input, got shape {patch.shape}"
        raise ShapeError(msg)
    factor = 2**depth
    if any(n % factor or n == 0 for n in batch.shape[1:]):
        msg = f"spatial dims {batch.shape[1:]} must be positive multiples of 2**depth = {factor}"
        raise ShapeError(msg)
    return batch[..., None].astype(np.float64), squeeze


def forward(
    model: UNetModel, patch: np.ndarray, training: bool = False, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Predict susceptibility (ppm) for standardized phase patches.

    ``patch`` is (X, Y, Z) or (N, X, Y, Z); the output has the same shape.
    Dropout and batch statistics are used only when ``training`` is set.
    """
    x, squeeze = _as_batch(patch, model.config.depth)
    skips = []
    h = x
    for encoder, down in zip(model.encoders, model.downs):
        h = encoder.forward(h, training, rng)
        skips.append(h)
        h = down.forward(h, training, rng)
    h = model.bottleneck.forward(h, training, rng)
    for level in reversed(range(model.config.depth)):
        h = model.ups[level].forward(h, training, rng)
        if model.config.skip_mode is SkipMode.CONCAT:
            h = np.concatenate([h, skips[level]], axis=-1)
        else:
            h = h + skips[level]
        h = model.decoders[level].forward(h, training, rng)
    out = model.head.forward(h, training, rng)[..., 0]
    return out[0] if squeeze else out


def backward_from_output(model: UNetModel, dout: np.ndarray) -> np.ndarray:
    """Propagate d(loss)/d(output) through the last forward pass; fills every layer's grads."""
    squeeze = dout.ndim == 3
    d = model.head.backward((dout[None] if squeeze else dout)[..., None])
    depth = model.config.depth
    d_skips: list[np.ndarray] = [None] * depth  # type: ignore[list-item]
    for level in range(depth):
        d = model.decoders[level].backward(d)
        width = model.config.widths[level]
        if model.config.skip_mode is SkipMode.CONCAT:
            d_up, d_skips[level] = d[..., :width], d[..., width:]
        else:
            d_up, d_skips[level] = d, d
        d = model.ups[level].backward(d_up)
    d = model.bottleneck.backward(d)
    for level in reversed(range(depth)):
        d = model.downs[level].backward(d)
        d = model.encoders[level].backward(d + d_skips[level])
    return d[0, ..., 0] if squeeze else d[..., 0]
