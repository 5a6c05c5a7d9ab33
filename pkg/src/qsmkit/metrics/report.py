# this_file: src/qsmkit/metrics/report.py
"""Metric reports and their CSV form."""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from loguru import logger

from qsmkit.core.constants import HFEN_SIGMA, HFEN_SUPPORT, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_SUPPORT
from qsmkit.metrics.quality import hfen, rmse, ssim
from qsmkit.metrics.roi import RoiStat, roi_error, roi_stats

if TYPE_CHECKING:
    from collections.abc import Iterable

    from qsmkit.volume.volume import Mask, Volume3D

CSV_FIELDS = [
    "method",
    "rmse_pct",
    "hfen_pct",
    "ssim",
    "label",
    "mean_ppm",
    "sd_ppm",
    "count",
    "abs_error_ppm",
]

FILTER_METADATA = {
    "hfen_sigma": HFEN_SIGMA,
    "hfen_support": HFEN_SUPPORT,
    "ssim_sigma": SSIM_SIGMA,
    "ssim_support": SSIM_SUPPORT,
    "ssim_k1": SSIM_K1,
    "ssim_k2": SSIM_K2,
}


@dataclass
class MetricReport:
    """Quality of one reconstruction against the truth."""

    method: str
    rmse_pct: float
    hfen_pct: float
    ssim: float
    seconds: float | None = None
    rois: dict[int, RoiStat] = field(default_factory=dict)
    roi_errors: dict[int, float] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=lambda: dict(FILTER_METADATA))

    def summary(self) -> dict[str, Any]:
        """JSON-friendly view without the per-ROI detail."""
        return {
            "method": self.method,
            "rmse_pct": self.rmse_pct,
            "hfen_pct": self.hfen_pct,
            "ssim": self.ssim,
            "seconds": self.seconds,
        }

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["rois"] = {str(k): asdict(v) for k, v in self.rois.items()}
        data["roi_errors"] = {str(k): v for k, v in self.roi_errors.items()}
        return data


def evaluate(
    recon: Volume3D,
    truth: Volume3D,
    mask: Mask,
    labels: Volume3D | None = None,
    method: str = "recon",
    seconds: float | None = None,
) -> MetricReport:
    """Compute RMSE, HFEN, SSIM and, with ``labels``, ROI statistics inside ``mask``."""
    report = MetricReport(
        method=method,
        rmse_pct=rmse(recon, truth, mask),
        hfen_pct=hfen(recon, truth, mask),
        ssim=ssim(recon, truth, mask),
        seconds=seconds,
    )
    if labels is not None:
        report.rois = roi_stats(recon, labels, mask)
        report.roi_errors = roi_error(recon, truth, labels, mask)
    logger.debug(f"{method}: rmse {report.rmse_pct:.2f}% hfen {report.hfen_pct:.2f}% ssim {report.ssim:.4f}")
    return report


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def write_metrics_csv(reports: Iterable[MetricReport], path: str | Path) -> Path:
    """One summary row per method followed by one row per ROI.

    Timings are left out so that reruns produce identical files.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for report in reports:
            writer.writerow(
                [
                    report.method,
                    _fmt(report.rmse_pct),
                    _fmt(report.hfen_pct),
                    _fmt(report.ssim),
                    "",
                    "",
                    "",
                    "",
                    "",
                ]
            )
            for label, stat in sorted(report.rois.items()):
                writer.writerow(
                    [
                        report.method,
                        "",
                        "",
                        "",
                        label,
                        _fmt(stat.mean),
                        _fmt(stat.sd),
                        stat.count,
                        _fmt(report.roi_errors.get(label)),
                    ]
                )
    return path


def read_metrics_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))
