"""
violation_report.py
===================

Module containing the ViolationReport dataclass, the result of one audit.

Every comparison of an audit produces a signed slack, lhs - rhs - tol, where
a positive slack is a violation. The report keeps the comparison count, the
violation count, the largest slack and a bounded sample of violating tuples.
"""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..util.print_color import print_verdict

MAX_SAMPLES = 20


@dataclass
class ViolationReport:
    """
    Outcome of one audit.

    Attributes
    ----------
    name : str
        Audit name
    total : int
        Number of comparisons
    violations : int
        Number of comparisons with positive slack
    worst_slack : float
        Largest slack seen; -inf before the first comparison
    samples : list[dict[str, Any]]
        Up to MAX_SAMPLES violating tuples
    detail : dict[str, Any]
        Audit-specific counters
    """

    name: str
    total: int = 0
    violations: int = 0
    worst_slack: float = -np.inf
    samples: list[dict[str, Any]] = field(default_factory=list)
    detail: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return (
            f"{self.name}: {self.violations} / {self.total} violations, "
            + f"worst slack {self.worst_slack:.3e}"
        )

    @property
    def rate(self) -> float:
        """Violation rate; 0 when nothing was compared."""
        return self.violations / self.total if self.total > 0 else 0.0

    def add(
        self,
        slack: np.ndarray | float,
        context: Optional[dict[str, Any]] = None,
        index_names: tuple[str, ...] = (),
    ) -> None:
        """
        Record the slacks of a batch of comparisons.

        Parameters
        ----------
        slack : np.ndarray | float
            Signed slacks; positive entries are violations
        context : dict[str, Any], optional
            Fields attached to every sampled violation of the batch
        index_names : tuple[str, ...], optional
            Names of the axes of `slack`, used to label sampled violations
        """
        s = np.atleast_1d(np.asarray(slack, dtype=float))
        if s.size == 0:
            return
        self.total += int(s.size)
        bad = s > 0
        n_bad = int(np.sum(bad))
        self.violations += n_bad
        self.worst_slack = max(self.worst_slack, float(np.max(s)))
        if n_bad == 0 or len(self.samples) >= MAX_SAMPLES:
            return
        room = MAX_SAMPLES - len(self.samples)
        for idx in np.argwhere(bad)[:room]:
            sample: dict[str, Any] = dict(context or {})
            for k, i in enumerate(idx):
                key = index_names[k] if k < len(index_names) else f"i{k}"
                sample[key] = int(i)
            sample["slack"] = float(s[tuple(idx)])
            self.samples.append(sample)

    def merge(self, other: "ViolationReport") -> "ViolationReport":
        """
        Combined report of two audits of the same kind.
        """
        out = ViolationReport(
            self.name,
            self.total + other.total,
            self.violations + other.violations,
            max(self.worst_slack, other.worst_slack),
            (self.samples + other.samples)[:MAX_SAMPLES],
            dict(self.detail),
        )
        for k, v in other.detail.items():
            if isinstance(v, (int, float)) and k in out.detail:
                out.detail[k] = out.detail[k] + v
            else:
                out.detail.setdefault(k, v)
        return out

    def verdict(self, budget: float, verbose: bool = True) -> bool:
        """
        Print a one-line verdict and return whether the rate is in budget.
        """
        return print_verdict(
            self.name, self.violations, self.total, budget, verbose
        )

    def to_dict(self) -> dict[str, Any]:
        """
        JSON-compatible form; an empty report has worst_slack None.
        """
        worst = None if self.total == 0 else float(self.worst_slack)
        return {
            "name": self.name,
            "total": self.total,
            "violations": self.violations,
            "rate": self.rate,
            "worst_slack": worst,
            "samples": self.samples,
            "detail": self.detail,
        }
