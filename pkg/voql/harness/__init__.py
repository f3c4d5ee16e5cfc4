"""
harness
=======

Subpackage for batch experiments: configuration, baselines, seeded runs,
result files and the command line interface.

Modules
-------
config
    ExperimentConfig and its JSON loader.
baselines
    LSVI-UCB and uniform-random comparison algorithms.
experiment
    Seeded runs and result emission.
summary
    Checkpoint statistics, regret exponent and violation totals.
cli
    The `voql` command.
harness_exceptions
    Exceptions raised by the subpackage.
"""

from .baselines import lsvi_ucb_baseline, uniform_random_baseline
from .config import EnvSpec, ExperimentConfig, load_config
from .experiment import (
    CSV_COLUMNS,
    build_family,
    build_instance,
    check_setup,
    run_experiment,
    run_seed,
    write_records,
)
from .harness_exceptions import ConfigError
from .summary import checkpoints, fit_exponent, is_concave, summarize

__all__ = [
    "lsvi_ucb_baseline",
    "uniform_random_baseline",
    "EnvSpec",
    "ExperimentConfig",
    "load_config",
    "CSV_COLUMNS",
    "build_family",
    "build_instance",
    "check_setup",
    "run_experiment",
    "run_seed",
    "write_records",
    "ConfigError",
    "checkpoints",
    "fit_exponent",
    "is_concave",
    "summarize",
]
