"""
learner
=======

Subpackage for the variance-weighted optimistic learner.

Modules
-------
params
    Confidence radii, switching threshold and their calibration.
voql_state
    Mutable state of a run.
backward_pass
    Construction of the value functions of an episode.
variance
    Variance estimator and regression weights.
exploration
    Switching exploration rule.
runner
    Outer loop and per-episode regret records.
run_log
    Per-episode snapshots for offline audits.
learner_exceptions
    Exceptions raised by the subpackage.
"""

from .backward_pass import backward_pass
from .exploration import select_action, should_switch
from .learner_exceptions import EpisodeError, ScheduleError
from .params import VoqlParams, build_params, calibrate
from .run_log import RunLog
from .runner import RECORD_FIELDS, RegretRecord, run, run_log_meta
from .variance import (
    sigma_bar,
    sigma_bar_value,
    sigma_estimate,
    sigma_sq_value,
)
from .voql_state import VoqlState

__all__ = [
    "backward_pass",
    "select_action",
    "should_switch",
    "EpisodeError",
    "ScheduleError",
    "VoqlParams",
    "build_params",
    "calibrate",
    "RunLog",
    "RECORD_FIELDS",
    "RegretRecord",
    "run",
    "run_log_meta",
    "sigma_bar",
    "sigma_bar_value",
    "sigma_estimate",
    "sigma_sq_value",
    "VoqlState",
]
