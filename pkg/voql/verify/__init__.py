"""
verify
======

Subpackage for audits of a run against the exact quantities of the instance.

Modules
-------
violation_report
    Result of one audit.
checks
    Monotonicity, variance, replay, bonus-contract and subsample audits.
verify_exceptions
    Exceptions raised by the subpackage.
"""

from .checks import (
    audit_log,
    check_bonus_contract,
    check_consistency,
    check_monotonicity,
    check_sigma_bar_replay,
    check_subsample,
    check_variance,
    load_run,
)
from .verify_exceptions import MissingLogError
from .violation_report import ViolationReport

__all__ = [
    "audit_log",
    "check_bonus_contract",
    "check_consistency",
    "check_monotonicity",
    "check_sigma_bar_replay",
    "check_subsample",
    "check_variance",
    "load_run",
    "MissingLogError",
    "ViolationReport",
]
