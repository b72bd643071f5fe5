"""Seeded experiment runner, statistics and the ``beetle-opt`` CLI."""
from ..records import RunRecord
from .config import (
    ConfigError,
    DatasetConfig,
    ExperimentConfig,
    load_dataset_config,
    load_experiment_config,
)
from .experiment import (
    ExperimentReport,
    Summary,
    VariantStats,
    read_trials,
    run_experiment,
    summarize,
    write_outputs,
)
