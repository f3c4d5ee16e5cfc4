"""
test_learner.py
===============

Tests the switching rule, the variance weights, the parameter schedule and
full runs of the learner on instances with a known answer.
"""

from pathlib import Path

import numpy as np
import pytest

from voql.bonus import make_oracle
from voql.env import gen_tabular_mdp, mdplib, solve_optimal
from voql.fclass import tabular_family
from voql.learner import (
    RunLog,
    VoqlParams,
    VoqlState,
    backward_pass,
    build_params,
    run,
    run_log_meta,
    select_action,
    should_switch,
    sigma_bar_value,
    sigma_sq_value,
)

from .build_instances import small_tabular_mdp


def _state(T: int = 10) -> VoqlState:
    mdp = small_tabular_mdp(seed=0)
    family = tabular_family(mdp, grid_step=0.5)
    params = build_params(mdp, family, make_oracle("vs"), T)
    return VoqlState(family, params)


def test_should_switch() -> None:
    """
    Switch only when v1 trails v2 by more than u.
    """
    assert not should_switch(0.5, 0.6, 0.2)
    assert should_switch(0.5, 0.8, 0.2)
    assert not should_switch(0.5, 0.7, 0.2)
    assert not should_switch(0.5, 0.5, 0.0)


def test_select_action_stays_on_f1() -> None:
    """
    A small gap keeps the greedy action of f_1 and leaves h_t unset.
    """
    state = _state()
    state.f1[1, 0] = [0.5, 0.1]
    state.f2[1, 0] = [0.2, 0.6]
    state.u = 0.2
    assert select_action(state, 0, 1, False) == (0, False)
    assert state.h_t == state.H + 1


def test_select_action_switches() -> None:
    """
    A large gap switches to f_2, records h_t and stays switched.
    """
    state = _state()
    state.f1[1, 0] = [0.5, 0.1]
    state.f2[1, 0] = [0.2, 0.8]
    state.u = 0.2
    assert select_action(state, 0, 1, False) == (1, True)
    assert state.h_t == 2
    state.f2[2, 3] = [0.9, 0.1]
    assert select_action(state, 3, 2, True) == (0, True)
    assert state.h_t == 2


def test_select_action_equal_tables() -> None:
    """
    With f_1 = f_2 and u >= 0 the rule never switches.
    """
    state = _state()
    rng = np.random.default_rng(0)
    state.f1[:] = rng.random(state.f1.shape)
    state.f2[:] = state.f1
    state.u = 0.0
    for h in range(state.H):
        for x in range(state.shape[0]):
            a, switched = select_action(state, x, h, False)
            assert not switched
            assert a == int(np.argmax(state.f1[h, x]))


def test_sigma_values() -> None:
    """
    Exact variance and zero width give sigma^2 = 0; the estimate is capped
    at 4 and the weight is at least alpha and sigma.
    """
    assert sigma_sq_value(0.25, 0.5, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0) == 0.0
    assert sigma_sq_value(0.0, 0.5, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0) == 0.0
    assert sigma_sq_value(9.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0) == 4.0
    assert sigma_bar_value(0.0, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0) == 0.1
    assert sigma_bar_value(2.0, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0) == 2.0
    spread = sigma_bar_value(0.0, 0.1, 1.0, 1.0, 0.5, 0.0, 0.0)
    assert spread == pytest.approx(np.sqrt(2.0) * np.sqrt(0.5))


def test_schedule() -> None:
    """
    Radii are non-decreasing, u is non-increasing and the default C_u sets
    u_1 = 2 whatever c_scale is; an explicit C_u is scaled by c_scale.
    """
    params = VoqlParams(T=50, H=3, c_scale=0.05, log_N=2.0, dim=4.0)
    params.check_schedule()
    assert params.u(1) == pytest.approx(2.0)
    theory = VoqlParams(T=50, H=3, c_scale=1.0, log_N=2.0, dim=4.0)
    assert theory.u(7) == pytest.approx(params.u(7))
    scaled = VoqlParams(T=50, H=3, c_scale=0.05, C_u=3.0, log_N=2.0, dim=4.0)
    assert scaled.u(1) == pytest.approx(0.05 * 3.0 * theory.u(1) / theory.C_u)
    prev = params.schedule(1)
    for t in range(2, 51):
        cur = params.schedule(t)
        assert cur["beta1"] >= prev["beta1"]
        assert cur["beta2"] >= prev["beta2"]
        assert cur["u"] <= prev["u"]
        prev = cur


def test_first_backward_pass() -> None:
    """
    Without data the bonuses cover the whole class, so f_1 is at the top of
    its range and the boundary level stays zero.
    """
    state = _state()
    oracle = make_oracle("vs")
    oracle.prepare(
        state.family, 10, state.H, state.params.alpha, 0.1, state.params.lam
    )
    state.begin_episode(1)
    backward_pass(state, state.family, oracle)
    assert np.all(state.f1[: state.H] == 1.0)
    assert np.all(state.f2[: state.H] >= state.f1[: state.H])
    assert state.check_boundary()
    with pytest.raises(ValueError):
        state.begin_episode(3)


def test_single_action_zero_regret() -> None:
    """
    With one action every policy is optimal.
    """
    mdp = mdplib.single_action(H=3, nX=3, seed=0)
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=8)
    records = run(mdp, family, oracle, params, np.random.default_rng(0))
    assert len(records) == 8
    for rec in records:
        assert rec.inst_regret == pytest.approx(0.0, abs=1e-12)


def test_zero_reward_zero_regret() -> None:
    """
    Without rewards every policy has value 0.
    """
    mdp = mdplib.zero_reward(H=2, nX=3, nA=2, seed=1)
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=8)
    records = run(mdp, family, oracle, params, np.random.default_rng(1))
    assert all(rec.inst_regret == 0.0 for rec in records)
    assert records[-1].cum_regret == 0.0


def test_run_records() -> None:
    """
    Regret is non-negative, cumulative regret adds up, h_t lies in
    [1, H + 1] and the mean weight is at least alpha.
    """
    mdp = small_tabular_mdp(seed=2)
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=12)
    records = run(mdp, family, oracle, params, np.random.default_rng(2))
    cum = 0.0
    for t, rec in enumerate(records, start=1):
        assert rec.episode == t
        assert rec.inst_regret >= -1e-12
        cum += rec.inst_regret
        assert rec.cum_regret == pytest.approx(cum)
        assert 1 <= rec.h_t <= mdp.H + 1
        assert rec.mean_sigma_bar >= params.alpha - 1e-12


def test_run_is_deterministic() -> None:
    """
    The same seed gives the same records.
    """
    mdp = small_tabular_mdp(seed=3)
    family = tabular_family(mdp, grid_step=0.5)
    rows = []
    for _ in range(2):
        oracle = make_oracle("vs")
        params = build_params(mdp, family, oracle, T=10)
        records = run(mdp, family, oracle, params, np.random.default_rng(7))
        rows.append([rec.as_row() for rec in records])
    assert rows[0] == rows[1]


def test_run_rejects_mismatched_family() -> None:
    """
    Family and instance must agree on the sizes.
    """
    mdp = small_tabular_mdp(seed=0)
    other = mdplib.zero_reward(H=3, nX=3, nA=2, seed=0)
    family = tabular_family(other, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(other, family, oracle, T=5)
    with pytest.raises(ValueError):
        run(mdp, family, oracle, params, np.random.default_rng(0))


def test_run_log(tmp_path: Path) -> None:
    """
    A logged run keeps one snapshot per episode and survives a save.
    """
    mdp = small_tabular_mdp(seed=4)
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=6)
    log = RunLog(run_log_meta(params))
    run(mdp, family, oracle, params, np.random.default_rng(4), log=log)
    assert len(log) == 6
    assert log["sigma_bar"].shape == (6, mdp.H)
    assert np.all(log["sigma_bar"] >= params.alpha)
    assert log["f1"].shape == (6, mdp.H, mdp.num_states, mdp.num_actions)
    filename = tmp_path / "runlog.npz"
    log.save(filename)
    loaded = RunLog.load(filename)
    assert len(loaded) == 6
    assert np.array_equal(loaded["x"], log["x"])
    assert loaded.meta["T"] == 6.0


def test_product_grid_indices_beyond_64_bits() -> None:
    """
    With 15 entries the second-moment grid class has 21^15 members, more
    than an int64 holds; runs must keep the member indices exact.
    """
    mdp = gen_tabular_mdp(H=2, nX=5, nA=3, seed=0)
    family = tabular_family(mdp)
    assert family.second[0].size > 2**63
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=3)
    records = run(mdp, family, oracle, params, np.random.default_rng(0))
    assert len(records) == 3
    assert all(rec.inst_regret >= -1e-12 for rec in records)


def test_theory_mode_optimism_gap() -> None:
    """
    With the theoretical constants the optimism gap max_z (f_1 - Q*) at the
    first level never grows and stays above -eps over 200 episodes.
    """
    mdp = mdplib.two_state_chain()
    family = tabular_family(mdp)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=200, c_scale=1.0)
    log = RunLog(run_log_meta(params))
    run(mdp, family, oracle, params, np.random.default_rng(11), log=log)
    Qstar = solve_optimal(mdp).Qstar
    gaps = np.max(log["f1"][:, 0] - Qstar[0][None, :, :], axis=(1, 2))
    assert gaps.shape == (200,)
    assert np.all(np.diff(gaps) <= 1e-12)
    assert np.mean(gaps >= -params.eps - 1e-12) >= 0.95


def test_deterministic_sigma_is_width_slack() -> None:
    """
    On a deterministic chain the fits at the last level are exact, so the
    variance part of sigma^2 vanishes and only the width slack is left.
    """
    mdp = mdplib.deterministic_chain(H=3, nX=3)
    family = tabular_family(mdp, grid_step=0.5)
    oracle = make_oracle("vs")
    params = build_params(mdp, family, oracle, T=40)
    log = RunLog(run_log_meta(params), keep_tables=False)
    run(mdp, family, oracle, params, np.random.default_rng(12), log=log)
    h = mdp.H - 1
    lam, L = log.meta["lam"], log.meta["L"]
    for t in range(1, 40):
        slack = log["d_unit"][t, h] * (
            np.sqrt(log["beta_bar"][t] ** 2 + lam)
            + 2 * L * np.sqrt(log["beta2"][t] ** 2 + lam)
        )
        assert log["sigma"][t, h] ** 2 == pytest.approx(min(4.0, slack))
    assert log["sigma"][0, h] == 2.0
