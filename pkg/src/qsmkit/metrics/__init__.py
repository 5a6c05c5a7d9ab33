# this_file: src/qsmkit/metrics/__init__.py
"""Evaluation metrics."""

from qsmkit.metrics.quality import hfen, log_kernel, rmse, ssim
from qsmkit.metrics.report import CSV_FIELDS, MetricReport, evaluate, read_metrics_csv, write_metrics_csv
from qsmkit.metrics.roi import RoiStat, roi_error, roi_stats

__all__ = [
    "CSV_FIELDS",
    "MetricReport",
    "RoiStat",
    "evaluate",
    "hfen",
    "log_kernel",
    "read_metrics_csv",
    "rmse",
    "roi_error",
    "roi_stats",
    "ssim",
    "write_metrics_csv",
]
