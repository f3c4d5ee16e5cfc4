"""
summary.py
==========

Module containing the summary statistics of a batch experiment: cumulative
regret at the checkpoints T/4, T/2 and T, the fitted power-law exponent of
the cumulative regret curve, the number of switching episodes per seed and
the invariant violation totals.
"""

from typing import Any, Optional

import numpy as np
from scipy.stats import linregress

from ..learner.runner import RegretRecord

MIN_FIT_POINTS = 3


def checkpoints(T: int) -> list[int]:
    """Episodes T/4, T/2 and T, each at least 1."""
    return [max(T // 4, 1), max(T // 2, 1), T]


def comparisons_per_episode(H: int, nX: int, nA: int) -> int:
    """
    Online invariant comparisons per episode: the three monotonicity
    inequalities at every (h, x, a), the variance lower bound at every
    visited level and the boundary check.
    """
    return 3 * H * nX * nA + H + 1


def fit_exponent(cum_regret: np.ndarray) -> Optional[float]:
    """
    Slope of the least-squares fit of log(cum regret) against log(t), over
    the episodes with positive cumulative regret. None with fewer than
    MIN_FIT_POINTS such episodes.
    """
    cum = np.asarray(cum_regret, dtype=float)
    t = np.arange(1, cum.size + 1)
    keep = cum > 0
    if int(np.sum(keep)) < MIN_FIT_POINTS:
        return None
    fit = linregress(np.log(t[keep]), np.log(cum[keep]))
    return float(fit.slope)


def is_concave(cum_regret: np.ndarray) -> bool:
    """
    Chord test of concavity from the origin: the average regret per episode
    does not increase across the checkpoints.
    """
    cum = np.asarray(cum_regret, dtype=float)
    marks = checkpoints(cum.size)
    rates = [cum[m - 1] / m for m in marks]
    return all(
        later <= earlier + 1e-12 for earlier, later in zip(rates, rates[1:])
    )


def num_switching(records: list[RegretRecord], H: int) -> int:
    """Episodes whose switch level is at most H."""
    return sum(1 for r in records if r.h_t <= H)


def summarize(
    runs: dict[int, list[RegretRecord]],
    H: int,
    comparisons: int = 0,
    budget: float = 0.05,
) -> dict[str, Any]:
    """
    Summary of the runs of one experiment.

    Parameters
    ----------
    runs : dict[int, list[RegretRecord]]
        Records per seed, all of the same length T
    H : int
        Horizon of the instance
    comparisons : int, optional
        Invariant comparisons per episode; 0 when no invariants were checked
    budget : float, optional
        Allowed violation rate, by default 0.05

    Returns
    -------
    summary : dict[str, Any]
        JSON-compatible summary
    """
    seeds = sorted(runs)
    T = len(runs[seeds[0]])
    curves = np.array([[r.cum_regret for r in runs[s]] for s in seeds])
    marks = checkpoints(T)
    at_checkpoints = []
    for m in marks:
        column = curves[:, m - 1]
        at_checkpoints.append(
            {
                "episode": m,
                "mean": float(np.mean(column)),
                "std": float(np.std(column)),
            }
        )
    mean_curve = np.mean(curves, axis=0)
    violations = {s: sum(r.violations for r in runs[s]) for s in seeds}
    total_violations = int(sum(violations.values()))
    total_comparisons = comparisons * T * len(seeds)
    rate = (
        total_violations / total_comparisons if total_comparisons > 0 else 0.0
    )
    return {
        "seeds": seeds,
        "T": T,
        "checkpoints": at_checkpoints,
        "exponent": fit_exponent(mean_curve),
        "exponent_per_seed": {
            str(s): fit_exponent(curves[i]) for i, s in enumerate(seeds)
        },
        "concave": is_concave(mean_curve),
        "switching_episodes": {
            str(s): num_switching(runs[s], H) for s in seeds
        },
        "violations": {
            "per_seed": {str(s): violations[s] for s in seeds},
            "total": total_violations,
            "comparisons": total_comparisons,
            "rate": rate,
            "budget": budget,
            "breach": rate > budget,
        },
    }
