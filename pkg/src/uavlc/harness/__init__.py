"""Experiment harness: configuration, pipeline, metrics, CLI."""

from .cli import main
from .config import VARIANTS, ConfigError, ExperimentConfig, default_lines, parse_config
from .pipeline import SWEEP_VARIABLES, MetricsRow, run_pipeline, sweep
from .report import (
    CSV_COLUMNS,
    MetricsFileError,
    load_metrics,
    report,
    write_metrics,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "MetricsFileError",
    "MetricsRow",
    "CSV_COLUMNS",
    "SWEEP_VARIABLES",
    "VARIANTS",
    "default_lines",
    "load_metrics",
    "main",
    "parse_config",
    "report",
    "run_pipeline",
    "sweep",
    "write_metrics",
]
