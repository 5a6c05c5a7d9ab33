# this_file: src/qsmkit/core/config.py
"""Configuration management for qsmkit."""

import math
from pathlib import Path

from platformdirs import user_data_dir
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qsmkit.core.constants import (
    DEFAULT_B0,
    DEFAULT_N_ECHOES,
    DEFAULT_TE_FIRST,
    DEFAULT_TE_SPACING,
    GAMMA,
    LR_FLOOR,
    SkipMode,
)
from qsmkit.core.exceptions import ConfigError


def _default_tes() -> list[float]:
    return [DEFAULT_TE_FIRST + i * DEFAULT_TE_SPACING for i in range(DEFAULT_N_ECHOES)]


class EchoTrain(BaseModel):
    """Multi-echo acquisition timing and field strength."""

    model_config = ConfigDict(frozen=True)

    tes: list[float] = Field(default_factory=_default_tes)
    b0: float = DEFAULT_B0
    gamma: float = GAMMA

    @field_validator("tes")
    @classmethod
    def _increasing(cls, tes: list[float]) -> list[float]:
        if not tes:
            msg = "echo train needs at least one echo time"
            raise ValueError(msg)
        if any(te <= 0 for te in tes):
            msg = "echo times must be positive"
            raise ValueError(msg)
        if any(b <= a for a, b in zip(tes, tes[1:])):
            msg = "echo times must be strictly increasing"
            raise ValueError(msg)
        return tes

    @field_validator("b0", "gamma")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            msg = "field strength and gyromagnetic ratio must be positive"
            raise ValueError(msg)
        return value

    @property
    def n_echoes(self) -> int:
        return len(self.tes)

    @property
    def sum_te(self) -> float:
        return float(sum(self.tes))


class SmvConfig(BaseModel):
    """Variable-radius SMV background removal settings (radii in voxels)."""

    model_config = ConfigDict(frozen=True)

    r_min: int = 1
    r_max: int = 25
    truncation: float = 0.05

    @model_validator(mode="after")
    def _check(self) -> "SmvConfig":
        if not 1 <= self.r_min <= self.r_max:
            msg = f"need 1 <= r_min <= r_max, got r_min={self.r_min}, r_max={self.r_max}"
            raise ValueError(msg)
        if not 0 < self.truncation < 1:
            msg = f"truncation must lie in (0, 1), got {self.truncation}"
            raise ValueError(msg)
        return self


class TkdConfig(BaseModel):
    """Truncated k-space division settings."""

    model_config = ConfigDict(frozen=True)

    threshold: float = 0.2
    zero_subthreshold: bool = False

    @field_validator("threshold")
    @classmethod
    def _range(cls, t: float) -> float:
        if not 0 < t < 2 / 3:
            msg = f"TKD threshold must lie in (0, 2/3), got {t}"
            raise ValueError(msg)
        return t


class CgConfig(BaseModel):
    """Masked CG-Tikhonov solver settings."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(default=1e-2, alias="lambda")
    max_iters: int = 100
    rtol: float = 1e-6

    @model_validator(mode="after")
    def _check(self) -> "CgConfig":
        if self.lam < 0:
            msg = "Tikhonov weight must be non-negative"
            raise ValueError(msg)
        if self.max_iters < 1:
            msg = "max_iters must be at least 1"
            raise ValueError(msg)
        if not self.rtol > 0:
            msg = "rtol must be positive"
            raise ValueError(msg)
        return self


class UNetConfig(BaseModel):
    """3D U-net architecture."""

    model_config = ConfigDict(frozen=True)

    depth: int = 3
    base_channels: int = 8
    patch_size: int = 32
    skip_mode: SkipMode = SkipMode.CONCAT
    dropout_rate: float = 0.10
    bn_momentum: float = 0.1
    bn_eps: float = 1e-5

    @model_validator(mode="after")
    def _check(self) -> "UNetConfig":
        if self.depth < 1:
            msg = "depth must be at least 1"
            raise ValueError(msg)
        if self.base_channels < 1:
            msg = "base_channels must be at least 1"
            raise ValueError(msg)
        if self.patch_size < 2**self.depth or self.patch_size % 2**self.depth:
            msg = f"patch_size {self.patch_size} must be a positive multiple of 2**depth = {2**self.depth}"
            raise ValueError(msg)
        if not 0 <= self.dropout_rate < 1:
            msg = "dropout_rate must lie in [0, 1)"
            raise ValueError(msg)
        return self

    @property
    def widths(self) -> list[int]:
        """Channel width per level, bottleneck last."""
        return [self.base_channels * 2**level for level in range(self.depth + 1)]


class TrainConfig(BaseModel):
    """Optimizer, schedule and sampling settings."""

    model_config = ConfigDict(frozen=True)

    batch_size: int = 8
    epochs: int = 20
    lr_initial: float = 1e-3
    lr_floor: float = LR_FLOOR
    decay_steps: int = 600
    lr_decay: float | None = None
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    patches_per_volume: int = 8
    validation_patches: int = 8

    @model_validator(mode="after")
    def _check(self) -> "TrainConfig":
        if self.batch_size < 1:
            msg = "batch_size must be at least 1"
            raise ValueError(msg)
        if not 0 < self.lr_floor <= self.lr_initial:
            msg = "need 0 < lr_floor <= lr_initial"
            raise ValueError(msg)
        if self.lr_decay is not None and not 0 < self.lr_decay <= 1:
            msg = "lr_decay must lie in (0, 1]"
            raise ValueError(msg)
        if self.epochs < 1 or self.decay_steps < 1 or self.patches_per_volume < 1:
            msg = "epochs, decay_steps and patches_per_volume must be positive"
            raise ValueError(msg)
        return self

    def resolved(self, steps_per_epoch: int) -> "TrainConfig":
        """Fill in lr_decay so the floor is reached at the end of training."""
        if self.lr_decay is not None:
            return self
        horizon = self.epochs * max(1, steps_per_epoch)
        n_decays = max(1, horizon // self.decay_steps)
        rho = (self.lr_floor / self.lr_initial) ** (1.0 / n_decays)
        return self.model_copy(update={"lr_decay": rho})

    def learning_rate(self, step: int) -> float:
        """Step-wise exponential schedule clamped at lr_floor."""
        rho = 1e-4 if self.lr_decay is None else self.lr_decay
        lr = self.lr_initial * rho ** (step // self.decay_steps)
        return max(self.lr_floor, lr) if math.isfinite(lr) else self.lr_floor


class IoConfig(BaseModel):
    """Input/output locations."""

    output_dir: Path = Path("qsmkit-out")
    model_path: Path | None = None


class PipelineConfig(BaseModel):
    """Umbrella configuration for the end-to-end pipeline."""

    app_name: str = "qsmkit"
    seed: int
    phantom_spec: Path | None = None
    echoes: EchoTrain = Field(default_factory=EchoTrain)
    smv: SmvConfig = Field(default_factory=SmvConfig)
    tkd: TkdConfig = Field(default_factory=TkdConfig)
    cg: CgConfig = Field(default_factory=CgConfig)
    unet: UNetConfig = Field(default_factory=UNetConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    io: IoConfig = Field(default_factory=IoConfig)
    snr: float | None = None
    mask_fraction: float = 0.5
    n_train: int = 10
    n_val: int = 2

    @model_validator(mode="after")
    def _check(self) -> "PipelineConfig":
        if self.phantom_spec is not None and not self.phantom_spec.exists():
            msg = f"phantom spec not found: {self.phantom_spec}"
            raise ValueError(msg)
        if self.snr is not None and not self.snr > 0:
            msg = "snr must be positive"
            raise ValueError(msg)
        if not 0 < self.mask_fraction < 1:
            msg = "mask_fraction must lie in (0, 1)"
            raise ValueError(msg)
        if self.n_train < 1 or self.n_val < 1:
            msg = "need at least one training and one validation phantom"
            raise ValueError(msg)
        return self

    @property
    def data_dir(self) -> Path:
        """Get the per-user data directory."""
        return Path(user_data_dir(appname=self.app_name))

    @property
    def default_model_path(self) -> Path:
        return self.io.model_path or self.data_dir / "models" / "unet.qsmn"

    def run_model_path(self, output_dir: Path) -> Path:
        """Checkpoint used by a pipeline run; relative paths resolve against ``output_dir``."""
        if self.io.model_path is None:
            return output_dir / "unet.qsmn"
        return self.io.model_path if self.io.model_path.is_absolute() else output_dir / self.io.model_path


def load_pipeline_config(path: str | Path) -> PipelineConfig:
    """Read and validate a JSON pipeline configuration."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        msg = f"cannot read config {path}: {e}"
        raise ConfigError(msg) from e
    try:
        return PipelineConfig.model_validate_json(text)
    except ValidationError as e:
        msg = f"invalid config {path}: {e.error_count()} error(s): {e.errors()[0]['msg']}"
        raise ConfigError(msg) from e
