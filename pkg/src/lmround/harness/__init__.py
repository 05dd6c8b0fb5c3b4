"""Experiment orchestration, file formats, figure data and the command line."""

from .experiment import (
    ExperimentConfig,
    EstimatorSetting,
    ReplicateError,
    ResultRow,
    run_experiment,
    run_replicates,
    summarize,
)
from .figures import FigureKind, figure_data
from .io import emit_table, read_series, read_table, write_series
from .tables import table_config

__all__ = [
    "EstimatorSetting",
    "ExperimentConfig",
    "FigureKind",
    "ReplicateError",
    "ResultRow",
    "emit_table",
    "figure_data",
    "read_series",
    "read_table",
    "run_experiment",
    "run_replicates",
    "summarize",
    "table_config",
    "write_series",
]
