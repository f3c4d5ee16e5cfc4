"""
test_verify.py
==============

Tests the offline audits: violation reports, the bonus contract, the
subsampled set and the audits of logged runs.
"""

from pathlib import Path

import numpy as np
import pytest

from voql.bonus import SubsampledSet, elliptical_bonus, make_oracle, vs_bonus
from voql.env import EpisodicMdp, gen_linear_mdp, mdplib, solve_optimal
from voql.fclass import (
    LevelDataset,
    build_linear_cover,
    tabular_family,
    weighted_regression,
)
from voql.learner import RunLog, build_params, run, run_log_meta
from voql.verify import (
    MissingLogError,
    ViolationReport,
    audit_log,
    check_bonus_contract,
    check_consistency,
    check_monotonicity,
    check_sigma_bar_replay,
    check_subsample,
    check_variance,
    load_run,
)

from .build_instances import (
    random_dataset,
    random_finite_class,
    small_tabular_mdp,
)


def _prefix(data: LevelDataset, n: int) -> LevelDataset:
    out = LevelDataset(data.alpha)
    for s in range(n):
        out.append(
            data.x[s], data.a[s], data.r[s], data.x_next[s], data.sigma_bar[s]
        )
    return out


def _logged_run(
    T: int, keep_tables: bool = True
) -> tuple[EpisodicMdp, RunLog]:
    mdp = small_tabular_mdp(seed=5)
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T)
    log = RunLog(run_log_meta(params), keep_tables=keep_tables)
    run(mdp, family, oracle, params, np.random.default_rng(5), log=log)
    return mdp, log


def test_violation_report() -> None:
    """
    Counting, sampling, merging and the JSON form.
    """
    report = ViolationReport("demo")
    assert report.rate == 0.0
    assert report.to_dict()["worst_slack"] is None
    report.add(np.array([-1.0, 0.5, 2.0]), {"t": 1}, ("z",))
    assert report.total == 3
    assert report.violations == 2
    assert report.worst_slack == 2.0
    assert report.samples[0] == {"t": 1, "z": 1, "slack": 0.5}
    other = ViolationReport("demo", detail={"n": 2})
    other.add(-0.5)
    merged = report.merge(other)
    assert merged.total == 4
    assert merged.violations == 2
    assert merged.rate == pytest.approx(0.5)
    assert merged.detail == {"n": 2}
    assert merged.to_dict()["worst_slack"] == 2.0


def test_check_consistency() -> None:
    """
    Increases above the tolerance are violations, ties are not.
    """
    tables = np.array([[1.0, 0.5], [1.0, 0.4], [0.9, 0.6]])
    report = check_consistency(tables, "demo")
    assert report.total == 4
    assert report.violations == 1
    assert report.samples[0]["t"] == 3


def test_vs_contract() -> None:
    """
    The exact version-space bonus with a fixed center meets its own
    contract: dominance, the width cap with constant 1 and consistency.
    """
    fclass = random_finite_class(60, nX=3, nA=2, seed=20)
    data = random_dataset(30, nX=3, nA=2, seed=21)
    center = weighted_regression(fclass, data, data.r, data.sigma_bar)
    bonuses = [
        vs_bonus(fclass, center, _prefix(data, n), 0.5)
        for n in range(0, 31, 5)
    ]
    reports = check_bonus_contract(
        bonuses, fclass, data, [center] * len(bonuses)
    )
    assert set(reports) == {"dominance", "cap", "consistency"}
    for report in reports.values():
        assert report.total > 0
        assert report.violations == 0


def test_elliptical_contract() -> None:
    """
    The elliptical bonus dominates the version-space bonus of the cover,
    stays within the cap and shrinks as data arrives with a fixed radius.
    """
    mdp = gen_linear_mdp(d=2, H=2, nX=4, nA=3, seed=22)
    assert mdp.phi is not None and mdp.B is not None
    fclass = build_linear_cover(mdp.phi[0], float(mdp.B[0]), eps_c=0.2)
    data = random_dataset(30, nX=4, nA=3, seed=23)
    bonuses, centers = [], []
    for n in range(0, 31, 6):
        sub = _prefix(data, n)
        centers.append(weighted_regression(fclass, sub, sub.r, sub.sigma_bar))
        bonuses.append(elliptical_bonus(fclass.phi, sub, 1.0, 1.0, fclass.B))
    reports = check_bonus_contract(bonuses, fclass, data, centers)
    for report in reports.values():
        assert report.violations == 0


def test_check_subsample() -> None:
    """
    A set holding every point once sits between the version-space bonuses
    of radius beta and 100 beta.
    """
    fclass = random_finite_class(40, nX=3, nA=2, seed=24)
    data = random_dataset(25, nX=3, nA=2, seed=25)
    sset = SubsampledSet(fclass, s_max=25)
    for x, a, s in zip(data.x, data.a, data.sigma_bar):
        sset.add(x, a, s, 1)
    center = weighted_regression(fclass, data, data.r, data.sigma_bar)
    report = check_subsample(data, sset, center, 0.05, s_max=25)
    assert report.violations == 0
    assert report.detail["distinct"] == len(sset)


def test_sigma_bar_replay() -> None:
    """
    Replaying a logged run gives the logged weights bit for bit.
    """
    _, log = _logged_run(8)
    report = check_sigma_bar_replay(log)
    assert report.total == 8 * log["sigma"].shape[1]
    assert report.violations == 0


def test_audit_log(tmp_path: Path) -> None:
    """
    A saved run log loads back and supports every audit.
    """
    mdp, log = _logged_run(6)
    filename = tmp_path / "runlog.npz"
    log.save(filename)
    reports = audit_log(load_run(filename), mdp)
    names = [r.name for r in reports]
    assert names == [
        "monotonicity",
        "variance",
        "b1_envelope",
        "b2_envelope",
        "sigma_bar_replay",
        "raw_consistency",
    ]
    by_name = {r.name: r for r in reports}
    assert by_name["b1_envelope"].violations == 0
    assert by_name["b2_envelope"].violations == 0
    assert by_name["sigma_bar_replay"].violations == 0


def test_audit_without_tables() -> None:
    """
    Without value tables only the table-free audits run.
    """
    mdp, log = _logged_run(4, keep_tables=False)
    names = [r.name for r in audit_log(log, mdp)]
    assert names == ["variance", "sigma_bar_replay", "raw_consistency"]
    with pytest.raises(MissingLogError):
        check_monotonicity(log, solve_optimal(mdp), mdp)


def test_load_run_missing(tmp_path: Path) -> None:
    """
    A missing file raises MissingLogError.
    """
    with pytest.raises(MissingLogError):
        load_run(tmp_path / "absent.npz")


def test_zero_bonus_negative_control() -> None:
    """
    Without bonuses the first value function is the empty-data fit, which
    lies below Q*, so the optimism audit reports violations.
    """
    mdp = mdplib.two_state_chain()
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("zero")
    params = build_params(mdp, family, oracle, T=5)
    log = RunLog(run_log_meta(params))
    run(mdp, family, oracle, params, np.random.default_rng(0), log=log)
    report = check_monotonicity(log, solve_optimal(mdp), mdp)
    assert report.detail["optimism"] > 0
    assert np.all(log["b1"] == 0.0)


def test_theory_mode_invariant_rates() -> None:
    """
    With the theoretical constants and classes that contain every table on
    the grid, the monotone chain and the variance lower bound hold on at
    least 95% of the audited comparisons, on each of 10 seeds.
    """
    for seed in range(10):
        mdp = small_tabular_mdp(seed=seed)
        family = tabular_family(mdp, grid_step=0.5)
        oracle = make_oracle("vs")
        params = build_params(mdp, family, oracle, T=50, c_scale=1.0)
        assert params.eps == 0.0
        log = RunLog(run_log_meta(params))
        rng = np.random.default_rng(seed)
        run(mdp, family, oracle, params, rng, log=log)
        solution = solve_optimal(mdp)
        chain = check_monotonicity(log, solution, mdp)
        lower = check_variance(log, mdp, solution, legs=("lower",))
        assert chain.total > 0 and lower.total == 50 * mdp.H
        assert chain.rate <= 0.05
        assert lower.rate <= 0.05
