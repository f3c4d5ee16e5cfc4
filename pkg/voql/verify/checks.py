"""
checks.py
=========

Module containing the audits of a run against the exact quantities of the
instance.

    check_monotonicity      f_{t,-2} <= Q* <= f_{t,1} <= f_{s,2} and
                            T f_{t,1}^{h+1} <= f_{s,2} for s <= t
    check_variance          lower and upper bounds of the variance estimate
    check_sigma_bar_replay  recomputed sigma_bar equals the logged value
    check_bonus_contract    dominance, cap and consistency of a bonus sequence
    check_subsample         sandwich and size bound of a subsampled set

Every audit is a pure function of its inputs; sampled grids are drawn from a
fixed seed, so reports are deterministic.
"""

from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..bonus.bonus_fn import BonusFn
from ..bonus.subsample import SubsampledSet, subsample_bonus
from ..bonus.version_space import vs_bonus
from ..eluder.uncertainty import UncertaintyContext
from ..env.dynamic_programming import (
    OptimalSolution,
    bellman_backup,
    conditional_moments,
    solve_optimal,
)
from ..env.episodic_mdp import EpisodicMdp
from ..fclass.function_class import FunctionClass
from ..fclass.level_dataset import LevelDataset
from ..learner.run_log import TABLE_KEYS, RunLog
from ..learner.variance import sigma_bar_value
from .verify_exceptions import MissingLogError
from .violation_report import ViolationReport

CHECK_TOL = 1e-9
GRID_POINTS = 64
CROSS_TIME_SAMPLES = 4
SUBSAMPLE_UPPER_FACTOR = 100.0


def load_run(filename: str | Path) -> RunLog:
    """
    Load a run log, raising MissingLogError if it cannot be read.
    """
    try:
        return RunLog.load(filename)
    except (OSError, KeyError, ValueError) as err:
        raise MissingLogError(f"cannot read run log {filename}: {err}") from err


def _require_tables(log: RunLog, audit: str) -> None:
    missing = [k for k in TABLE_KEYS if not log.has(k)]
    if missing:
        raise MissingLogError(f"{audit} needs logged tables, missing {missing}")


def _grid(
    nX: int, nA: int, points: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    n = nX * nA
    flat = np.arange(n) if n <= points else rng.choice(n, points, False)
    return flat // nA, flat % nA


# STRUCTURAL INVARIANTS ######################################################


def check_monotonicity(
    log: RunLog,
    solution: OptimalSolution,
    mdp: EpisodicMdp,
    grid_points: int = GRID_POINTS,
    seed: int = 0,
) -> ViolationReport:
    """
    Audit the monotone chain of the value functions on a sampled grid.

    For every logged episode t and level h, on up to `grid_points` pairs z:
    f_{t,-2}(z) <= Q*(z) <= f_{t,1}(z), and for s = t and a few s <= t drawn
    log-uniformly, f_{t,1}(z) <= f_{s,2}(z) and (T f_{t,1}^{h+1})(z) <=
    f_{s,2}(z).
    """
    _require_tables(log, "check_monotonicity")
    rng = np.random.default_rng(seed)
    f1, f2, fm2 = log["f1"], log["f2"], log["fm2"]
    T, H = f1.shape[0], f1.shape[1]
    Q = solution.Qstar
    report = ViolationReport("monotonicity")
    report.detail = {"lower": 0, "optimism": 0, "cross_time": 0}
    names = ("z",)
    for h in range(H):
        gx, ga = _grid(mdp.num_states, mdp.num_actions, grid_points, rng)
        q = Q[h, gx, ga]
        for t in range(T):
            ctx = {"t": t + 1, "h": h + 1}
            lower = fm2[t, h, gx, ga] - q - CHECK_TOL
            upper = q - f1[t, h, gx, ga] - CHECK_TOL
            report.add(lower, ctx | {"leg": "lower"}, names)
            report.add(upper, ctx | {"leg": "optimism"}, names)
            report.detail["lower"] += int(np.sum(lower > 0))
            report.detail["optimism"] += int(np.sum(upper > 0))
            if h + 1 < H:
                v_next = np.max(f1[t, h + 1], axis=1)
            else:
                v_next = np.zeros(mdp.num_states)
            backed = bellman_backup(mdp, h, v_next)[gx, ga]
            lhs = np.maximum(f1[t, h, gx, ga], backed)
            s_draw = np.exp(rng.random(CROSS_TIME_SAMPLES) * np.log(t + 1))
            s_all = np.unique(
                np.concatenate(([t], np.clip(s_draw.astype(int) - 1, 0, t)))
            )
            for s in s_all:
                slack = lhs - f2[s, h, gx, ga] - CHECK_TOL
                report.add(slack, ctx | {"s": int(s) + 1}, names)
                report.detail["cross_time"] += int(np.sum(slack > 0))
    return report


def check_variance(
    log: RunLog,
    mdp: EpisodicMdp,
    solution: OptimalSolution,
    legs: Sequence[str] = ("lower", "upper"),
) -> ViolationReport:
    """
    Audit the variance estimate at every visited point.

    Lower leg: sigma^2 >= V[r + V*^{h+1}(x') | z]. Upper leg:
    sigma^2 <= V[r + f_{t,1}^{h+1}(x') | z] + 4 (f_2 - f_-2)(z)
               + 4 min(1, D_1 (2 sqrt(bbeta^2 + lam) + 4 L sqrt(beta_2^2
               + lam))) + 4 (2 + L) eps.
    The upper leg needs logged tables.
    """
    for leg in legs:
        if leg not in ("lower", "upper"):
            raise ValueError(f"unknown leg '{leg}'")
    if "upper" in legs:
        _require_tables(log, "check_variance")
    meta = log.meta
    lam, L, eps = meta["lam"], meta["L"], meta["eps"]
    x, a, sigma = log["x"], log["a"], log["sigma"]
    T, H = x.shape
    report = ViolationReport("variance")
    report.detail = {"lower": 0, "upper": 0}
    star_var = [
        conditional_moments(mdp, solution.Vstar[h + 1], h)[1] for h in range(H)
    ]
    d_unit = log["d_unit"]
    beta2, beta_bar = log["beta2"], log["beta_bar"]
    if "upper" in legs:
        f1, f2, fm2 = log["f1"], log["f2"], log["fm2"]
    else:
        f1 = f2 = fm2 = np.zeros((T, H, mdp.num_states, mdp.num_actions))
    for t in range(T):
        for h in range(H):
            z = (int(x[t, h]), int(a[t, h]))
            s2 = float(sigma[t, h]) ** 2
            ctx = {"t": t + 1, "h": h + 1, "x": z[0], "a": z[1]}
            if "lower" in legs:
                slack = star_var[h][z] - s2 - CHECK_TOL
                report.add(slack, ctx | {"leg": "lower"})
                report.detail["lower"] += int(slack > 0)
            if "upper" in legs:
                if h + 1 < H:
                    v_next = np.max(f1[t, h + 1], axis=1)
                else:
                    v_next = np.zeros(mdp.num_states)
                _, var = conditional_moments(mdp, v_next, h)
                width = d_unit[t, h] * (
                    2 * np.sqrt(beta_bar[t] ** 2 + lam)
                    + 4 * L * np.sqrt(beta2[t] ** 2 + lam)
                )
                bound = (
                    var[z]
                    + 4 * (f2[t, h][z] - fm2[t, h][z])
                    + 4 * min(1.0, width)
                    + 4 * (2 + L) * eps
                )
                slack = s2 - bound - CHECK_TOL
                report.add(slack, ctx | {"leg": "upper"})
                report.detail["upper"] += int(slack > 0)
    return report


def check_sigma_bar_replay(log: RunLog) -> ViolationReport:
    """
    Recompute every logged sigma_bar from the logged inputs; any difference,
    however small, is a violation.
    """
    alpha = log.meta["alpha"]
    sigma, logged = log["sigma"], log["sigma_bar"]
    f2_z, fm2_z, d_w = log["f2_z"], log["fm2_z"], log["d_weighted"]
    iota, upsilon = log["iota"], log["upsilon"]
    T, H = sigma.shape
    report = ViolationReport("sigma_bar_replay")
    for t in range(T):
        for h in range(H):
            if t == 0:
                replay = max(float(sigma[t, h]), alpha)
            else:
                replay = sigma_bar_value(
                    float(sigma[t, h]),
                    alpha,
                    float(iota[t]),
                    float(upsilon[t]),
                    float(f2_z[t, h]),
                    float(fm2_z[t, h]),
                    float(d_w[t, h]),
                )
            diff = abs(replay - float(logged[t, h]))
            slack = diff if diff > 0 else -1.0
            report.add(slack, {"t": t + 1, "h": h + 1})
    return report


# BONUS CONTRACT #############################################################


def check_consistency(
    tables: np.ndarray, name: str, tol: float = CHECK_TOL
) -> ViolationReport:
    """
    Audit that a bonus sequence of shape (T, ...) is pointwise
    non-increasing in t.
    """
    tables = np.asarray(tables, dtype=float)
    report = ViolationReport(name)
    for t in range(1, tables.shape[0]):
        report.add(tables[t] - tables[t - 1] - tol, {"t": t + 1})
    return report


def _prefix(data: LevelDataset, n: int) -> LevelDataset:
    if n > len(data):
        raise MissingLogError(f"bonus used {n} points, data has {len(data)}")
    out = LevelDataset(data.alpha)
    for x, a, r, xn, sb in zip(
        data.x[:n], data.a[:n], data.r[:n], data.x_next[:n], data.sigma_bar[:n]
    ):
        out.append(x, a, r, xn, sb)
    return out


def check_bonus_contract(
    bonuses: Sequence[BonusFn],
    fclass: FunctionClass,
    data: LevelDataset,
    centers: Sequence[int],
    lam: float = 1.0,
    cap_constant: float = 1.0,
    eps_b: float = 0.0,
    unit_weights: bool = False,
    queries: Optional[tuple[np.ndarray, np.ndarray]] = None,
) -> dict[str, ViolationReport]:
    """
    Audit a bonus sequence of one (level, slot) against the exact
    version-space bonus.

    Bonus i was built from the first bonuses[i].n_data points of `data`
    around the member centers[i]. Three reports are returned:

    dominance    b(z) >= vs_bonus(z) at the queried points
    cap          b(z) <= C (D(z) sqrt(beta^2 + lam) + eps_b beta)
    consistency  b_i(z) <= b_{i-1}(z)

    Parameters
    ----------
    bonuses : Sequence[BonusFn]
        The sequence, in episode order
    fclass : FunctionClass
        Class over which the version space is enumerated
    data : LevelDataset
        The data of the level, in arrival order
    centers : Sequence[int]
        Regression centers, one per bonus
    lam : float, optional
        Regularizer of D, by default 1.0
    cap_constant : float, optional
        Constant C of the cap, by default 1.0
    eps_b : float, optional
        Additive slack of the cap, by default 0
    unit_weights : bool, optional
        Use unit weights instead of the data weights sigma_bar
    queries : tuple[np.ndarray, np.ndarray], optional
        Arrays (x, a) of query points; all pairs by default
    """
    if len(bonuses) != len(centers):
        raise ValueError("need one center per bonus")
    if queries is None:
        nX, nA = fclass.num_states, fclass.num_actions
        qx, qa = np.divmod(np.arange(nX * nA), nA)
    else:
        qx, qa = queries
    dominance = ViolationReport("dominance")
    cap = ViolationReport("cap")
    for i, (b, c) in enumerate(zip(bonuses, centers)):
        sub = _prefix(data, b.n_data)
        w = sub.unit_weights() if unit_weights else sub.sigma_bar
        exact = vs_bonus(fclass, c, sub, b.beta, w).table
        dominance.add(exact[qx, qa] - b.table[qx, qa] - CHECK_TOL, {"i": i})
        ctx = UncertaintyContext(fclass, lam)
        for x, a, s in zip(sub.x, sub.a, w):
            ctx.append(x, a, s)
        width = np.sqrt(ctx.dsq_table()[qx, qa])
        bound = cap_constant * (
            width * np.sqrt(b.beta**2 + lam) + eps_b * b.beta
        )
        cap.add(b.table[qx, qa] - bound - CHECK_TOL, {"i": i})
    tables = np.array([b.table for b in bonuses])
    consistency = check_consistency(tables, "consistency")
    return {"dominance": dominance, "cap": cap, "consistency": consistency}


def check_subsample(
    data: LevelDataset,
    sset: SubsampledSet,
    center: int,
    beta: float,
    s_max: int,
    upper_factor: float = SUBSAMPLE_UPPER_FACTOR,
) -> ViolationReport:
    """
    Audit a subsampled set built from `data`: pointwise
    vs_bonus(beta) <= subsample_bonus(beta) <= vs_bonus(upper_factor beta)
    over the full data, and len(sset) <= s_max.
    """
    fclass = sset.fclass
    report = ViolationReport("subsample")
    report.detail = {"lower": 0, "upper": 0, "size": 0}
    sub = subsample_bonus(sset, center, beta).table
    low = vs_bonus(fclass, center, data, beta).table
    high = vs_bonus(fclass, center, data, upper_factor * beta).table
    lower = low - sub - CHECK_TOL
    upper = sub - high - CHECK_TOL
    report.add(lower, {"leg": "lower"}, ("x", "a"))
    report.add(upper, {"leg": "upper"}, ("x", "a"))
    size = float(len(sset) - s_max)
    report.add(size if size > 0 else -1.0, {"leg": "size"})
    report.detail["lower"] = int(np.sum(lower > 0))
    report.detail["upper"] = int(np.sum(upper > 0))
    report.detail["size"] = int(size > 0)
    report.detail["distinct"] = len(sset)
    return report


# LOG AUDITS #################################################################


def audit_log(
    log: RunLog, mdp: EpisodicMdp, solution: Optional[OptimalSolution] = None
) -> list[ViolationReport]:
    """
    All audits that a run log supports.
    """
    if solution is None:
        solution = solve_optimal(mdp)
    has_tables = all(log.has(k) for k in TABLE_KEYS)
    reports = []
    if has_tables:
        reports.append(check_monotonicity(log, solution, mdp))
        reports.append(check_variance(log, mdp, solution))
        reports.append(check_consistency(log["b1"], "b1_envelope"))
        reports.append(check_consistency(log["b2"], "b2_envelope"))
    else:
        reports.append(check_variance(log, mdp, solution, legs=("lower",)))
    reports.append(check_sigma_bar_replay(log))
    raw = ViolationReport("raw_consistency")
    raw.total = int(np.size(log["raw_violations"]))
    raw.detail = {"raw_violations": int(np.sum(log["raw_violations"]))}
    raw.worst_slack = -1.0
    reports.append(raw)
    return reports
