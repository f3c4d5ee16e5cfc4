"""
baselines.py
============

Module containing the comparison algorithms of the harness.

lsvi_ucb_baseline is optimistic least-squares value iteration with unit
weights: per level a ridge fit of r + V^{h+1}(x') on the features, plus the
elliptical bonus beta ||phi||_{Lambda^{-1}}, clipped to [0, 1], acted on
greedily. uniform_random_baseline acts uniformly at random. Neither keeps
variance weights, so their records carry mean_sigma_bar = NaN.
"""

import numpy as np
from tqdm import tqdm

from ..eluder.gram_inverse import GramInverse
from ..env.dynamic_programming import (
    greedy_policy,
    policy_value,
    simulate_episode,
    solve_optimal,
    uniform_policy,
)
from ..env.env_exceptions import FeatureError
from ..env.episodic_mdp import EpisodicMdp
from ..learner.runner import RegretRecord


def lsvi_ucb_beta(
    d: int, H: int, T: int, delta: float, c_scale: float
) -> float:
    """
    Bonus multiplier c_scale * d * sqrt(log(2 d H T / delta)).
    """
    return float(c_scale * d * np.sqrt(np.log(2 * d * H * T / delta)))


def lsvi_ucb_baseline(
    mdp: EpisodicMdp,
    T: int,
    rng: np.random.Generator,
    c_scale: float = 0.05,
    delta: float = 0.1,
    lam: float = 1.0,
    verbose: bool = False,
) -> list[RegretRecord]:
    """
    Run LSVI-UCB for T episodes.

    Parameters
    ----------
    mdp : EpisodicMdp
        Instance with features
    T : int
        Number of episodes
    rng : np.random.Generator
        Source of all randomness
    c_scale : float, optional
        Bonus multiplier; 0 gives greedy fitted Q-iteration
    delta : float, optional
        Failure probability, by default 0.1
    lam : float, optional
        Ridge regularizer, by default 1.0
    verbose : bool, optional
        Progress bar, by default False
    """
    if mdp.phi is None:
        raise FeatureError("lsvi-ucb needs an instance with features")
    phi = mdp.phi
    H, nX, d = mdp.H, mdp.num_states, mdp.d
    beta = lsvi_ucb_beta(d, H, T, delta, c_scale)
    v_star = solve_optimal(mdp).initial_value(mdp)
    grams = [GramInverse(d, lam) for _ in range(H)]
    feats: list[list[np.ndarray]] = [[] for _ in range(H)]
    rewards: list[list[float]] = [[] for _ in range(H)]
    nexts: list[list[int]] = [[] for _ in range(H)]

    records: list[RegretRecord] = []
    cum = 0.0
    episodes = range(1, T + 1)
    for t in tqdm(episodes) if verbose else episodes:
        Q = np.zeros((H, nX, mdp.num_actions))
        V_next = np.zeros(nX)
        for h in range(H - 1, -1, -1):
            if rewards[h]:
                Phi = np.array(feats[h])
                y = np.array(rewards[h]) + V_next[np.array(nexts[h])]
                w = grams[h].inv @ (Phi.T @ y)
            else:
                w = np.zeros(d)
            width = np.sqrt(grams[h].norm_sq(phi[h]))
            Q[h] = np.clip(phi[h] @ w + beta * width, 0.0, 1.0)
            V_next = np.max(Q[h], axis=1)
        pi = greedy_policy(Q)
        v1 = float(mdp.mu @ policy_value(mdp, pi)[0])
        best = np.argmax(Q, axis=2)
        traj = simulate_episode(mdp, lambda h, x: int(best[h, x]), rng)
        for h in range(H):
            x, a = int(traj.states[h]), int(traj.actions[h])
            grams[h].update(phi[h, x, a])
            feats[h].append(phi[h, x, a])
            rewards[h].append(float(traj.rewards[h]))
            nexts[h].append(int(traj.states[h + 1]))
        inst = v_star - v1
        cum += inst
        records.append(
            RegretRecord(
                episode=t,
                realized_return=traj.total_reward,
                v1_exact=v1,
                inst_regret=inst,
                cum_regret=cum,
                h_t=H + 1,
                mean_sigma_bar=np.nan,
            )
        )
    return records


def uniform_random_baseline(
    mdp: EpisodicMdp,
    T: int,
    rng: np.random.Generator,
    verbose: bool = False,
) -> list[RegretRecord]:
    """
    Act uniformly at random for T episodes.
    """
    v_star = solve_optimal(mdp).initial_value(mdp)
    v1 = float(mdp.mu @ policy_value(mdp, uniform_policy(mdp))[0])
    nA = mdp.num_actions
    records: list[RegretRecord] = []
    cum = 0.0
    episodes = range(1, T + 1)
    for t in tqdm(episodes) if verbose else episodes:
        traj = simulate_episode(mdp, lambda h, x: int(rng.integers(nA)), rng)
        inst = v_star - v1
        cum += inst
        records.append(
            RegretRecord(
                episode=t,
                realized_return=traj.total_reward,
                v1_exact=v1,
                inst_regret=inst,
                cum_regret=cum,
                h_t=mdp.H + 1,
                mean_sigma_bar=np.nan,
            )
        )
    return records
