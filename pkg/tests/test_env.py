"""
test_env.py
===========

Tests the episodic MDP, its generators and the exact dynamic-programming
oracles.
"""

import itertools
from pathlib import Path

import numpy as np
import pytest

from voql.env import (
    EpisodicMdp,
    GeneratorError,
    InvalidMdpError,
    evaluate_exploration_policy,
    expected_total_variance,
    gen_linear_mdp,
    gen_tabular_mdp,
    greedy_policy,
    mdplib,
    monte_carlo_exploration_value,
    policy_value,
    simulate_episode,
    solve_optimal,
    true_conditional,
)

from .build_instances import coin_mdp, reference_linear_mdp, small_tabular_mdp

TOL = 1e-12


def test_bellman_residual_random_tabular() -> None:
    """
    Q* satisfies the Bellman equation on random tabular instances and the
    total conditional variance along the optimal policy is at most 1.
    """
    for seed in range(20):
        mdp = gen_tabular_mdp(H=4, nX=5, nA=3, seed=seed)
        sol = solve_optimal(mdp)
        assert sol.bellman_residual(mdp) <= TOL
        assert np.all(sol.Vstar[-1] == 0)
        ltv = expected_total_variance(mdp, greedy_policy(sol.Qstar))
        assert ltv <= 1.0 + 1e-9


def test_reference_linear_instance() -> None:
    """
    The reference linear instance factorizes exactly and keeps every
    trajectory reward in [0, 1].
    """
    mdp = reference_linear_mdp()
    assert mdp.is_linear
    assert mdp.d == 3
    assert mdp.factorization_residual() <= 1e-10
    assert mdp.max_trajectory_reward() <= 1.0
    assert mdp.B is not None
    assert np.all(mdp.B >= 1.0)
    assert np.allclose(mdp.P.sum(axis=3), 1.0, atol=TOL)


def test_one_dimensional_features() -> None:
    """
    With d = 1 every state-action pair has the same next-state law.
    """
    mdp = gen_linear_mdp(d=1, H=3, nX=4, nA=2, seed=3)
    for h in range(mdp.H):
        rows = mdp.P[h].reshape(-1, mdp.num_states)
        assert np.allclose(rows, rows[0], atol=TOL)


def test_one_hot_embeds_tabular() -> None:
    """
    One-hot features embed the tabular instance of the same seed exactly.
    """
    tab = gen_tabular_mdp(H=3, nX=3, nA=2, seed=5)
    lin = gen_linear_mdp(d=6, H=3, nX=3, nA=2, seed=5, feature_kind="one_hot")
    assert np.array_equal(lin.P, tab.P)
    assert np.array_equal(lin.R, tab.R)
    assert lin.factorization_residual() == 0.0


def test_generator_rejects_bad_sizes() -> None:
    """
    Generators raise on impossible feature dimensions and tiny spaces.
    """
    with pytest.raises(GeneratorError):
        gen_linear_mdp(d=7, H=2, nX=3, nA=2, seed=0)
    with pytest.raises(GeneratorError):
        gen_linear_mdp(d=4, H=2, nX=3, nA=2, seed=0, feature_kind="one_hot")
    with pytest.raises(GeneratorError):
        gen_tabular_mdp(H=2, nX=1, nA=2, seed=0)


def test_generators_are_seeded() -> None:
    """
    The same seed gives the same instance.
    """
    a = gen_linear_mdp(d=2, H=3, nX=4, nA=2, seed=11)
    b = gen_linear_mdp(d=2, H=3, nX=4, nA=2, seed=11)
    assert np.array_equal(a.P, b.P)
    assert np.array_equal(a.R, b.R)


def test_zero_reward_and_unit_horizon() -> None:
    """
    Zero rewards give Q* = 0; with H = 1, Q* equals the mean reward.
    """
    mdp = mdplib.zero_reward(H=3, nX=3, nA=2, seed=1)
    assert np.all(solve_optimal(mdp).Qstar == 0)
    mdp = gen_tabular_mdp(H=1, nX=3, nA=2, seed=2)
    assert np.array_equal(solve_optimal(mdp).Qstar[0], mdp.R[0])


def test_two_state_chain() -> None:
    """
    The optimal value from state 0 is 0.6 and equals the best of the 16
    deterministic policies.
    """
    mdp = mdplib.two_state_chain()
    v_star = solve_optimal(mdp).initial_value(mdp)
    assert v_star == pytest.approx(0.6, abs=TOL)
    best = 0.0
    for choice in itertools.product(range(2), repeat=4):
        pi = np.zeros((2, 2, 2))
        for k, a in enumerate(choice):
            pi[k // 2, k % 2, a] = 1.0
        best = max(best, float(mdp.mu @ policy_value(mdp, pi)[0]))
    assert best == pytest.approx(v_star, abs=TOL)


def test_deterministic_chain() -> None:
    """
    The chain pays 1 iff the horizon reaches the last state.
    """
    mdp = mdplib.deterministic_chain(H=3, nX=3)
    assert solve_optimal(mdp).initial_value(mdp) == pytest.approx(1.0)
    mdp = mdplib.deterministic_chain(H=2, nX=3)
    assert solve_optimal(mdp).initial_value(mdp) == 0.0


def test_true_conditional() -> None:
    """
    Exact conditional moments on known cases and against sampling.
    """
    mdp = coin_mdp()
    mean, var = true_conditional(mdp, np.full(2, 0.3), 0, (0, 1))
    assert mean == pytest.approx(0.3)
    assert var == pytest.approx(0.0, abs=TOL)
    mean, var = true_conditional(mdp, np.array([0.0, 1.0]), 0, (1, 0))
    assert mean == pytest.approx(0.5)
    assert var == pytest.approx(0.25)

    mdp = small_tabular_mdp(seed=4)
    rng = np.random.default_rng(0)
    f = rng.random(mdp.num_states)
    h, z = mdp.H - 1, (1, 1)
    mean, var = true_conditional(mdp, f, h, z)
    n = 20000
    samples = np.zeros(n)
    for i in range(n):
        r, x_next = mdp.step(h, z[0], z[1], rng)
        samples[i] = r + f[x_next]
    se = np.std(samples) / np.sqrt(n)
    assert abs(np.mean(samples) - mean) <= 5 * se + 1e-9


def test_exploration_policy_limits() -> None:
    """
    With equal tables or an infinite threshold the exploration policy is the
    greedy policy of f1; with threshold -inf it is the greedy policy of f2.
    """
    mdp = small_tabular_mdp(seed=6)
    rng = np.random.default_rng(1)
    f1 = rng.random((mdp.H, mdp.num_states, mdp.num_actions))
    f2 = rng.random((mdp.H, mdp.num_states, mdp.num_actions))
    v_f1 = float(mdp.mu @ policy_value(mdp, greedy_policy(f1))[0])
    v_f2 = float(mdp.mu @ policy_value(mdp, greedy_policy(f2))[0])
    assert evaluate_exploration_policy(mdp, f1, f1, 0.0) == pytest.approx(
        v_f1, abs=TOL
    )
    assert evaluate_exploration_policy(
        mdp, f1, f2, float("inf")
    ) == pytest.approx(v_f1, abs=TOL)
    assert evaluate_exploration_policy(
        mdp, f1, f2, float("-inf")
    ) == pytest.approx(v_f2, abs=TOL)


def test_exploration_policy_monte_carlo() -> None:
    """
    The exact value of the exploration policy agrees with rollouts.
    """
    rng = np.random.default_rng(2)
    for seed in range(10):
        mdp = gen_tabular_mdp(H=3, nX=4, nA=3, seed=100 + seed)
        shape = (mdp.H, mdp.num_states, mdp.num_actions)
        f1 = rng.random(shape)
        f2 = f1 + rng.random(shape)
        exact = evaluate_exploration_policy(mdp, f1, f2, 0.3)
        mean, se = monte_carlo_exploration_value(mdp, f1, f2, 0.3, 100000, rng)
        assert abs(mean - exact) <= 4 * se + 1e-9


def test_simulate_episode() -> None:
    """
    Rollouts have the documented shapes and follow the acting function.
    """
    mdp = mdplib.deterministic_chain(H=3, nX=3)
    traj = simulate_episode(mdp, lambda h, x: 0, np.random.default_rng(0))
    assert list(traj.states) == [0, 1, 2, 2]
    assert list(traj.actions) == [0, 0, 0]
    assert traj.total_reward == 1.0
    with pytest.raises(ValueError):
        simulate_episode(mdp, lambda h, x: 5, np.random.default_rng(0))


def test_json_roundtrip(tmp_path: Path) -> None:
    """
    An instance written to JSON loads back unchanged.
    """
    mdp = reference_linear_mdp()
    filename = tmp_path / "instance.json"
    mdp.save_json(filename)
    loaded = EpisodicMdp.load_json(filename)
    assert loaded.name == mdp.name
    assert np.array_equal(loaded.P, mdp.P)
    assert np.array_equal(loaded.R, mdp.R)
    assert loaded.phi is not None and mdp.phi is not None
    assert np.array_equal(loaded.phi, mdp.phi)
    assert np.array_equal(loaded.B, mdp.B)


def test_invalid_mdp() -> None:
    """
    Malformed kernels and rewards are rejected.
    """
    P = np.full((2, 2, 2, 2), 0.5)
    R = np.zeros((2, 2, 2))
    mu = np.array([0.5, 0.5])
    bad_rows = P.copy()
    bad_rows[0, 0, 0] = [0.6, 0.6]
    with pytest.raises(InvalidMdpError):
        EpisodicMdp(P=bad_rows, R=R, mu=mu)
    with pytest.raises(InvalidMdpError):
        EpisodicMdp(P=P, R=R + 1.5, mu=mu)
    with pytest.raises(InvalidMdpError):
        EpisodicMdp(P=P, R=np.full((2, 2, 2), 0.6), mu=mu)
    with pytest.raises(InvalidMdpError):
        EpisodicMdp(P=P, R=R, mu=np.array([0.7, 0.7]))
