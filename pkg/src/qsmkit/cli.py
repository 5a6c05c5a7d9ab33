# this_file: src/qsmkit/cli.py
"""CLI interface for qsmkit using Fire and Rich.

Every subcommand prints one JSON summary line on stdout; logs and errors go
to stderr. Exit codes: 1 usage or configuration, 2 I/O, file format or input shape,
3 numerical failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import fire
from loguru import logger
from pydantic import ValidationError
from rich.console import Console

from qsmkit import api
from qsmkit.background.vsharp import vsharp_remove
from qsmkit.core.config import PipelineConfig, load_pipeline_config
from qsmkit.core.constants import DEFAULT_WINDOW, UnitTag
from qsmkit.core.exceptions import CheckpointError, ConfigError, QsmError, ShapeError, VolumeFormatError
from qsmkit.metrics.report import evaluate as evaluate_metrics
from qsmkit.metrics.report import write_metrics_csv
from qsmkit.neural.checkpoint import load_checkpoint, save_checkpoint
from qsmkit.neural.predict import predict_volume
from qsmkit.phantom.builder import build_phantom
from qsmkit.phantom.signal import forward_field, synthesize_echoes
from qsmkit.phantom.spec import PhantomSpec, default_phantom_spec, random_phantom_spec
from qsmkit.preprocess.normalize import NormalizedPhase, normalize_phase
from qsmkit.utils.imaging import AXES, emit_slices
from qsmkit.utils.logging import setup_logging
from qsmkit.volume.files import read_mask, read_volume, write_volume

console = Console(soft_wrap=True)
err_console = Console(stderr=True, soft_wrap=True)

SUBCOMMANDS = (
    "phantom",
    "forward",
    "echoes",
    "unwrap",
    "normalize",
    "bgremove",
    "invert",
    "train",
    "predict",
    "evaluate",
    "slices",
    "pipeline",
)
USAGE = f"usage: qsmkit [--verbose] <{'|'.join(SUBCOMMANDS)}> [options]  (qsmkit <command> --help)"


def _emit(summary: dict[str, Any]) -> None:
    console.print(json.dumps(summary, sort_keys=True), markup=False, highlight=False)


def _error(kind: str, message: str) -> None:
    err_console.print(json.dumps({"error": kind, "message": message}), markup=False, highlight=False)


def _config(config: str | None, seed: int | None = None, stochastic: bool = False) -> PipelineConfig:
    """Load ``config`` or fall back to defaults; a seed flag overrides the file."""
    if config is not None:
        cfg = load_pipeline_config(config)
        return cfg if seed is None else cfg.model_copy(update={"seed": int(seed)})
    if seed is None and stochastic:
        msg = "this command is stochastic: pass --seed or a --config with a seed"
        raise ConfigError(msg)
    return PipelineConfig(seed=0 if seed is None else int(seed))


class QsmCli:
    """Quantitative susceptibility mapping toolkit.

    Args:
        verbose: Enable debug logging
        quiet: Only log warnings and errors
    """

    def __init__(self, verbose: bool = False, quiet: bool = False) -> None:
        setup_logging(verbose, quiet)

    def phantom(
        self,
        out_dir: str = ".",
        spec: str | None = None,
        random_seed: int | None = None,
        dims: int = 64,
        save_spec: bool = False,
    ) -> None:
        """Build a phantom: chi, brain mask and label volumes.

        Args:
            out_dir: Output directory
            spec: PhantomSpec JSON; the default head when omitted
            random_seed: Build a randomized head with this seed instead
            dims: Grid edge for the built-in heads (voxels)
            save_spec: Also write the spec used as phantom_spec.json
        """
        grid = (int(dims),) * 3
        if spec is not None:
            phantom_spec = PhantomSpec.load(spec)
        elif random_seed is not None:
            phantom_spec = random_phantom_spec(int(random_seed), grid)
        else:
            phantom_spec = default_phantom_spec(grid)
        phantom = build_phantom(phantom_spec)
        out = Path(out_dir)
        write_volume(phantom.chi, out / api.CHI)
        write_volume(phantom.brain_mask.as_volume(), out / api.BRAIN_MASK)
        write_volume(phantom.labels, out / api.LABELS)
        if save_spec:
            phantom_spec.save(out / "phantom_spec.json")
        _emit(
            {
                "command": "phantom",
                "dims": list(phantom.chi.dims),
                "brain_voxels": phantom.brain_mask.count,
                "structures": len(phantom_spec.structures),
                "output_dir": str(out),
            }
        )

    def forward(self, chi: str, out: str = api.FIELD, b0_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)) -> None:
        """Total field (ppm) of a susceptibility map.

        Args:
            chi: Susceptibility volume (ppm)
            out: Output field volume
            b0_axis: Main field direction
        """
        field = forward_field(read_volume(chi, UnitTag.PPM), b0_axis)
        write_volume(field, out)
        _emit({"command": "forward", "output": str(out), "max_abs_ppm": float(abs(field.data).max())})

    def echoes(
        self,
        field: str,
        out_dir: str = ".",
        mask: str | None = None,
        snr: float | None = None,
        seed: int | None = None,
        config: str | None = None,
    ) -> None:
        """Wrapped multi-echo phase and magnitude from a total field.

        Args:
            field: Total field volume (ppm)
            out_dir: Output directory
            mask: Support of the synthetic magnitude; the whole FOV when omitted
            snr: Peak-magnitude SNR; noiseless when omitted
            seed: Noise seed (required with --snr unless the config has one)
            config: Pipeline config JSON providing the echo train
        """
        cfg = _config(config, seed, stochastic=snr is not None)
        snr = cfg.snr if snr is None else float(snr)
        delta = read_volume(field, UnitTag.PPM)
        support = read_mask(mask) if mask else None
        train = synthesize_echoes(delta, cfg.echoes, snr=snr, seed=cfg.seed, support=support)
        out = Path(out_dir)
        for i, echo in enumerate(train):
            phase_name, mag_name = api.echo_names(i)
            write_volume(echo.phase, out / phase_name)
            write_volume(echo.magnitude, out / mag_name)
        _emit({"command": "echoes", "n_echoes": len(train), "snr": snr, "output_dir": str(out)})

    def unwrap(self, *phases: str, out_dir: str = ".", mask: str | None = None) -> None:
        """Laplacian unwrapping of wrapped phase volumes.

        Args:
            *phases: Wrapped phase volumes (radians)
            out_dir: Output directory; files are named <stem>_unwrapped.qsmv
            mask: Signal mask; inside it only in-mask neighbours are used
        """
        if not phases:
            msg = "unwrap needs at least one phase volume"
            raise ConfigError(msg)
        support = read_mask(mask) if mask else None
        unwrapped = api.unwrap_echoes([read_volume(p, UnitTag.RADIANS) for p in phases], support)
        outputs = []
        for source, volume in zip(phases, unwrapped):
            target = Path(out_dir) / f"{Path(source).stem}_unwrapped.qsmv"
            outputs.append(str(write_volume(volume, target)))
        _emit({"command": "unwrap", "outputs": outputs})

    def normalize(self, *phases: str, out: str = api.PSI, config: str | None = None) -> None:
        """Combine unwrapped echoes into the normalized total field psi (ppm).

        Args:
            *phases: Unwrapped phase volumes in echo order
            out: Output psi volume
            config: Pipeline config JSON providing the echo train
        """
        cfg = _config(config)
        psi = normalize_phase([read_volume(p, UnitTag.RADIANS) for p in phases], cfg.echoes)
        write_volume(psi.psi, out)
        _emit({"command": "normalize", "n_echoes": psi.n_echoes, "sum_te": psi.sum_te, "output": str(out)})

    def bgremove(
        self,
        psi: str,
        mask: str,
        out_dir: str = ".",
        r_min: int | None = None,
        r_max: int | None = None,
        truncation: float | None = None,
        config: str | None = None,
    ) -> None:
        """V-SHARP background field removal.

        Args:
            psi: Total field volume (ppm)
            mask: Brain mask volume
            out_dir: Output directory for local.qsmv and reliable_mask.qsmv
            r_min: Smallest SMV radius (voxels)
            r_max: Largest SMV radius (voxels)
            truncation: Deconvolution truncation level
            config: Pipeline config JSON with an smv section
        """
        cfg = _config(config)
        overrides = {"r_min": r_min, "r_max": r_max, "truncation": truncation}
        smv = cfg.smv.model_validate({**cfg.smv.model_dump(), **{k: v for k, v in overrides.items() if v is not None}})
        local, reliable = vsharp_remove(NormalizedPhase.from_volume(read_volume(psi, UnitTag.PPM)), read_mask(mask), smv)
        out = Path(out_dir)
        write_volume(local, out / api.LOCAL)
        write_volume(reliable.as_volume(), out / api.RELIABLE_MASK)
        _emit({"command": "bgremove", "reliable_voxels": reliable.count, "output_dir": str(out)})

    def invert(
        self,
        local: str,
        method: str = "tkd",
        mask: str | None = None,
        out: str | None = None,
        tkd_threshold: float | None = None,
        max_iters: int | None = None,
        config: str | None = None,
        **options: Any,
    ) -> None:
        """Dipole inversion of a local field with TKD or masked CG-Tikhonov.

        Args:
            local: Local field volume (ppm)
            method: tkd or cg
            mask: Mask for the CG data term
            out: Output volume; chi_<method>.qsmv by default
            tkd_threshold: TKD threshold t
            max_iters: CG iteration limit
            config: Pipeline config JSON
            **options: --lambda for the CG Tikhonov weight
        """
        unknown = set(options) - {"lambda"}
        if unknown:
            msg = f"unknown invert options: {sorted(unknown)}"
            raise ConfigError(msg)
        cfg = _config(config)
        if tkd_threshold is not None:
            cfg = cfg.model_copy(update={"tkd": cfg.tkd.model_validate({**cfg.tkd.model_dump(), "threshold": tkd_threshold})})
        cg_update = {k: v for k, v in {"lam": options.get("lambda"), "max_iters": max_iters}.items() if v is not None}
        if cg_update:
            cfg = cfg.model_copy(update={"cg": cfg.cg.model_validate({**cfg.cg.model_dump(), **cg_update})})
        chi = api.reconstruct(read_volume(local, UnitTag.PPM), method, read_mask(mask) if mask else None, cfg)
        name = api.CG_METHOD if method == "cg" else method
        target = Path(out) if out else Path(api.recon_name(name))
        write_volume(chi, target)
        _emit({"command": "invert", "method": name, "output": str(target)})

    def train(self, out: str | None = None, config: str | None = None, seed: int | None = None, dims: int = 64) -> None:
        """Train the U-net on randomized phantoms.

        Args:
            out: Checkpoint path; the per-user model location by default
            config: Pipeline config JSON (unet, train, echoes, snr, n_train, n_val)
            seed: Run seed (required unless the config has one)
            dims: Phantom grid edge (voxels)
        """
        cfg = _config(config, seed, stochastic=True)
        result = api.train_model(cfg, (int(dims),) * 3)
        target = Path(out) if out else cfg.default_model_path
        save_checkpoint(result.model, target)
        history = [vars(entry) for entry in result.history]
        target.with_suffix(".history.json").write_text(json.dumps(history, indent=2))
        _emit(
            {
                "command": "train",
                "checkpoint": str(target),
                "best_epoch": result.best_epoch,
                "best_validation": result.best_validation,
                "initial_validation": result.initial_validation,
            }
        )

    def predict(
        self,
        psi: str,
        model: str | None = None,
        out: str = api.recon_name("unet"),
        input_mask: str | None = None,
        display_mask: str | None = None,
    ) -> None:
        """Whole-volume susceptibility from the total field with a trained U-net.

        Args:
            psi: Total field volume (ppm)
            model: Checkpoint; the per-user model location by default
            out: Output susceptibility volume (ppm)
            input_mask: Zero psi outside this mask before prediction
            display_mask: Zero the prediction outside this mask before writing
        """
        path = Path(model) if model else PipelineConfig(seed=0).default_model_path
        unet = load_checkpoint(path)
        chi = predict_volume(unet, read_volume(psi, UnitTag.PPM), read_mask(input_mask) if input_mask else None)
        if display_mask:
            chi = chi.masked(read_mask(display_mask))
        write_volume(chi, out)
        _emit({"command": "predict", "model": str(path), "output": str(out)})

    def evaluate(
        self,
        recon: str,
        truth: str,
        mask: str,
        labels: str | None = None,
        method: str = "recon",
        out: str = api.METRICS_CSV,
    ) -> None:
        """RMSE, HFEN, SSIM and ROI statistics of a reconstruction, written as CSV.

        Args:
            recon: Reconstructed susceptibility (ppm)
            truth: Reference susceptibility (ppm)
            mask: Evaluation mask
            labels: Optional label volume for ROI rows
            method: Method name for the CSV
            out: CSV path
        """
        report = evaluate_metrics(
            read_volume(recon, UnitTag.PPM),
            read_volume(truth, UnitTag.PPM),
            read_mask(mask),
            read_volume(labels) if labels else None,
            method,
        )
        write_metrics_csv([report], out)
        _emit({"command": "evaluate", "output": str(out), **report.summary()})

    def slices(
        self,
        volume: str,
        axis: str = "z",
        indices: tuple[int, ...] | int | None = None,
        out_dir: str = "slices",
        lo: float = DEFAULT_WINDOW[0],
        hi: float = DEFAULT_WINDOW[1],
        stem: str | None = None,
        mask: str | None = None,
    ) -> None:
        """Windowed 8-bit PNG slices.

        Args:
            volume: Volume to render
            axis: x, y or z
            indices: Slice indices; the centre slice when omitted
            out_dir: Output directory
            lo: Window lower bound (ppm)
            hi: Window upper bound (ppm)
            stem: File name prefix; the volume's stem by default
            mask: Display mask
        """
        vol = read_volume(volume)
        if indices is None:
            indices = (vol.dims[AXES.get(str(axis), 2)] // 2,)
        elif isinstance(indices, int):
            indices = (indices,)
        paths = emit_slices(
            vol,
            axis,
            [int(i) for i in indices],
            out_dir,
            (float(lo), float(hi)),
            stem or Path(volume).stem,
            read_mask(mask) if mask else None,
        )
        _emit({"command": "slices", "outputs": [str(p) for p in paths]})

    def pipeline(self, config: str | None = None, out_dir: str | None = None, seed: int | None = None) -> None:
        """Run phantom, forward, echoes, unwrap, normalize, V-SHARP, TKD/CG/U-net and evaluation.

        Args:
            config: Pipeline config JSON
            out_dir: Output directory; io.output_dir of the config by default
            seed: Run seed (required unless the config has one)
        """
        cfg = _config(config, seed, stochastic=True)
        result = api.run_pipeline(cfg, out_dir)
        _emit(result.summary)


def run_subcommand(argv: list[str] | None = None) -> int:
    """Run one subcommand and map failures to exit codes."""
    argv = list(sys.argv[1:] if argv is None else argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    if command not in SUBCOMMANDS:
        err_console.print(USAGE, markup=False, highlight=False)
        _error("UsageError", f"unknown or missing subcommand: {command!r}")
        return 1
    try:
        fire.Fire(QsmCli, command=argv, name="qsmkit")
    except SystemExit as e:
        if e.code in (0, None):
            return 0
        _error("UsageError", f"invalid arguments for {command}")
        return 1
    except ConfigError as e:
        _error(type(e).__name__, str(e))
        return 1
    except ValidationError as e:
        _error("ConfigError", f"invalid option: {e.errors()[0]['msg']}")
        return 1
    except (OSError, VolumeFormatError, CheckpointError, ShapeError) as e:
        _error(type(e).__name__, str(e))
        return 2
    except QsmError as e:
        logger.debug(f"{command} failed: {e!r}")
        _error(type(e).__name__, str(e))
        return 3
    return 0


def main() -> int:
    """Main entry point for the CLI."""
    return run_subcommand()


if __name__ == "__main__":
    sys.exit(main())
