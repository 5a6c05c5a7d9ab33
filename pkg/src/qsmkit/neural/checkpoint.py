# this_file: src/qsmkit/neural/checkpoint.py
"""Model checkpoints ("QSMN").

Layout: magic ``QSMN`` | version u16 | header length u32 | UTF-8 JSON header
(config, standardization, step, tensor manifest) | float64 little-endian
payload in manifest order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
from loguru import logger
from pydantic import ValidationError

from qsmkit.core.config import UNetConfig
from qsmkit.core.constants import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from qsmkit.core.exceptions import CheckpointError, ShapeError
from qsmkit.neural.unet import UNetModel, build_unet
from qsmkit.preprocess.normalize import Standardization

_PREFIX = struct.Struct("<4sHI")


def _tensors(model: UNetModel) -> dict[str, np.ndarray]:
    return {**model.parameters(), **model.buffers()}


def save_checkpoint(model: UNetModel, path: str | Path) -> Path:
    """Write every parameter and batch-norm statistic bit-exactly."""
    tensors = _tensors(model)
    header = {
        "config": model.config.model_dump(mode="json"),
        "stats": None if model.stats is None else {"mean": model.stats.mean, "std": model.stats.std},
        "step": model.step,
        "tensors": [{"name": name, "shape": list(value.shape)} for name, value in tensors.items()],
    }
    blob = json.dumps(header, sort_keys=True).encode()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(_PREFIX.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, len(blob)))
        f.write(blob)
        for value in tensors.values():
            f.write(np.ascontiguousarray(value, dtype="<f8").tobytes())
    logger.debug(f"Saved checkpoint with {len(tensors)} tensors to {path}")
    return path


def load_checkpoint(path: str | Path) -> UNetModel:
    """Rebuild a model from a checkpoint file.

    Raises:
        CheckpointError: Bad magic, unsupported version, malformed header or
            a payload that does not match the manifest.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _PREFIX.size:
        msg = f"{path}: too short for a checkpoint"
        raise CheckpointError(msg)
    magic, version, header_len = _PREFIX.unpack_from(raw)
    if magic != CHECKPOINT_MAGIC:
        msg = f"{path}: bad magic {magic!r}"
        raise CheckpointError(msg)
    if version != CHECKPOINT_VERSION:
        msg = f"{path}: unsupported checkpoint version {version}"
        raise CheckpointError(msg)
    offset = _PREFIX.size + header_len
    try:
        header = json.loads(raw[_PREFIX.size : offset].decode())
        config = UNetConfig.model_validate(header["config"])
        manifest = [(entry["name"], tuple(entry["shape"])) for entry in header["tensors"]]
    except (ValueError, KeyError, TypeError, ValidationError) as e:
        msg = f"{path}: malformed checkpoint header: {e}"
        raise CheckpointError(msg) from e

    expected = sum(int(np.prod(shape)) for _, shape in manifest) * 8
    if len(raw) - offset != expected:
        msg = f"{path}: payload has {len(raw) - offset} bytes, manifest needs {expected}"
        raise CheckpointError(msg)
    model = build_unet(config)
    if {name for name, _ in manifest} != set(_tensors(model)):
        msg = f"{path}: tensor manifest does not match the configured architecture"
        raise CheckpointError(msg)
    for name, shape in manifest:
        count = int(np.prod(shape))
        value = np.frombuffer(raw, dtype="<f8", count=count, offset=offset).reshape(shape)
        offset += 8 * count
        try:
            model.set_tensor(name, value)
        except ShapeError as e:
            msg = f"{path}: {e}"
            raise CheckpointError(msg) from e
    stats = header.get("stats")
    model.stats = None if stats is None else Standardization(float(stats["mean"]), float(stats["std"]))
    model.step = int(header.get("step", 0))
    return model
