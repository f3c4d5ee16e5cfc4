"""
dynamic_programming.py
======================

Module containing exact dynamic-programming oracles for EpisodicMdp
instances: optimal values, conditional means and variances of one-step
targets, values of Markov policies and of the switching exploration policy,
occupancy measures and episode simulation.

Value arrays carry one extra level: V[H] is the terminal boundary V^{H+1} = 0.
All oracles are pure functions of their inputs.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .episodic_mdp import EpisodicMdp

BELLMAN_TOL = 1e-12


@dataclass(frozen=True)
class OptimalSolution:
    """
    Optimal action-value and value tables.

    Attributes
    ----------
    Qstar : np.ndarray
        Q*^h(x, a), shape (H, nX, nA)
    Vstar : np.ndarray
        V*^h(x), shape (H + 1, nX), with Vstar[H] = 0
    """

    Qstar: np.ndarray
    Vstar: np.ndarray

    def initial_value(self, mdp: EpisodicMdp) -> float:
        """Return E_{x ~ mu} V*^1(x)."""
        return float(mdp.mu @ self.Vstar[0])

    def bellman_residual(self, mdp: EpisodicMdp) -> float:
        """Max |Q*^h - T V*^{h+1}| over all (h, x, a)."""
        res = 0.0
        for h in range(mdp.H):
            backup = bellman_backup(mdp, h, self.Vstar[h + 1])
            res = max(res, float(np.max(np.abs(self.Qstar[h] - backup))))
        return res


@dataclass
class Trajectory:
    """
    One realized episode: states has length H + 1, the others length H.
    """

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray

    @property
    def total_reward(self) -> float:
        """Realized return of the episode."""
        return float(np.sum(self.rewards))


# ONE-STEP OPERATORS #########################################################


def bellman_backup(mdp: EpisodicMdp, h: int, f: np.ndarray) -> np.ndarray:
    """
    Return (T f)(x, a) = E[r^h + f(x') | x, a] for all (x, a) at level h.
    """
    return mdp.R[h] + mdp.P[h] @ np.asarray(f, dtype=float)


def conditional_moments(
    mdp: EpisodicMdp, f: np.ndarray, h: int
) -> tuple[np.ndarray, np.ndarray]:
    """
    Return the mean and variance of r^h + f(x') given (x, a), as arrays of
    shape (nX, nA).

    The realized reward and next state are drawn independently given (x, a),
    so the variance splits into the reward variance plus the variance of
    f(x').
    """
    f = np.asarray(f, dtype=float)
    Ef = mdp.P[h] @ f
    centered = f[None, None, :] - Ef[:, :, None]
    var_f = np.einsum("xay,xay->xa", mdp.P[h], centered**2)
    mean = mdp.R[h] + Ef
    var = mdp.reward_variance()[h] + var_f
    return mean, np.maximum(var, 0.0)


def true_conditional(
    mdp: EpisodicMdp, f: np.ndarray, h: int, z: tuple[int, int]
) -> tuple[float, float]:
    """
    Return (E[r^h + f(x') | z], V[r^h + f(x') | z]) computed exactly.

    Parameters
    ----------
    mdp : EpisodicMdp
        The instance
    f : np.ndarray
        Function on states, shape (nX,)
    h : int
        Level, 0 <= h < H
    z : tuple[int, int]
        State-action pair (x, a)
    """
    x, a = z
    mean, var = conditional_moments(mdp, f, h)
    return float(mean[x, a]), float(var[x, a])


# OPTIMAL CONTROL ############################################################


def solve_optimal(mdp: EpisodicMdp) -> OptimalSolution:
    """
    Exact backward dynamic programming for Q* and V*.
    """
    H, nX, nA = mdp.H, mdp.num_states, mdp.num_actions
    Q = np.zeros((H, nX, nA))
    V = np.zeros((H + 1, nX))
    for h in range(H - 1, -1, -1):
        Q[h] = bellman_backup(mdp, h, V[h + 1])
        V[h] = np.max(Q[h], axis=1)
    return OptimalSolution(Qstar=Q, Vstar=V)


def greedy_policy(Q: np.ndarray) -> np.ndarray:
    """
    Deterministic greedy policy of a per-level Q table, as a one-hot array of
    shape (H, nX, nA); ties go to the lowest action index.
    """
    H, nX, nA = Q.shape
    pi = np.zeros((H, nX, nA))
    best = np.argmax(Q, axis=2)
    pi[np.arange(H)[:, None], np.arange(nX)[None, :], best] = 1.0
    return pi


def uniform_policy(mdp: EpisodicMdp) -> np.ndarray:
    """Uniformly random Markov policy."""
    shape = (mdp.H, mdp.num_states, mdp.num_actions)
    return np.full(shape, 1.0 / mdp.num_actions)


def policy_value(mdp: EpisodicMdp, pi: np.ndarray) -> np.ndarray:
    """
    Value V^h(x) of a stochastic Markov policy pi[h, x, a], shape (H + 1, nX).
    """
    V = np.zeros((mdp.H + 1, mdp.num_states))
    for h in range(mdp.H - 1, -1, -1):
        Q = bellman_backup(mdp, h, V[h + 1])
        V[h] = np.sum(pi[h] * Q, axis=1)
    return V


def occupancy(mdp: EpisodicMdp, pi: np.ndarray) -> np.ndarray:
    """
    State-action occupancy measures Pr(x^h = x, a^h = a), shape (H, nX, nA).
    """
    occ = np.zeros((mdp.H, mdp.num_states, mdp.num_actions))
    state_dist = mdp.mu.copy()
    for h in range(mdp.H):
        occ[h] = state_dist[:, None] * pi[h]
        state_dist = np.einsum("xa,xay->y", occ[h], mdp.P[h])
    return occ


def expected_total_variance(mdp: EpisodicMdp, pi: np.ndarray) -> float:
    """
    Return E[sum_h V[r^h + V^{h+1}(x') | z^h]] along trajectories of pi, with
    V the value of pi. The law of total variance bounds this by the variance
    of the return, hence by 1 in the sparse-reward regime.
    """
    V = policy_value(mdp, pi)
    occ = occupancy(mdp, pi)
    total = 0.0
    for h in range(mdp.H):
        _, var = conditional_moments(mdp, V[h + 1], h)
        total += float(np.sum(occ[h] * var))
    return total


# EXPLORATION POLICY #########################################################


def _switch_table(
    f1: np.ndarray, f2: np.ndarray, u: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Return (switch[h, x], a1[h, x], a2[h, x]) for the switching rule: an
    unswitched episode switches at (h, x) iff max_a f1 < max_a f2 - u.
    """
    switch = np.max(f1, axis=2) < np.max(f2, axis=2) - u
    return switch, np.argmax(f1, axis=2), np.argmax(f2, axis=2)


def evaluate_exploration_policy(
    mdp: EpisodicMdp, f1: np.ndarray, f2: np.ndarray, u: float
) -> float:
    """
    Exact value E_{x ~ mu} V_t^1(x) of the switching exploration policy.

    The policy acts greedily on f1 until the first level where
    max_a f1^h(x, a) < max_a f2^h(x, a) - u, and greedily on f2 from that level
    on. It is Markov in the augmented state (x, switched), on which the DP
    runs.

    Parameters
    ----------
    mdp : EpisodicMdp
        The instance
    f1, f2 : np.ndarray
        Per-level Q tables, shape (H, nX, nA)
    u : float
        Switching threshold; may be +/- inf
    """
    W0, _ = _exploration_values(mdp, f1, f2, u)
    return float(mdp.mu @ W0[0])


def _exploration_values(
    mdp: EpisodicMdp, f1: np.ndarray, f2: np.ndarray, u: float
) -> tuple[np.ndarray, np.ndarray]:
    H, nX = mdp.H, mdp.num_states
    switch, a1, a2 = _switch_table(f1, f2, u)
    xs = np.arange(nX)
    W0 = np.zeros((H + 1, nX))  # not yet switched
    W1 = np.zeros((H + 1, nX))  # switched
    for h in range(H - 1, -1, -1):
        Q1 = bellman_backup(mdp, h, W1[h + 1])
        Q0 = bellman_backup(mdp, h, W0[h + 1])
        W1[h] = Q1[xs, a2[h]]
        W0[h] = np.where(switch[h], W1[h], Q0[xs, a1[h]])
    return W0, W1


def switch_probability(
    mdp: EpisodicMdp, f1: np.ndarray, f2: np.ndarray, u: float
) -> float:
    """
    Probability that the exploration policy switches at some level, i.e.
    that the episode falls in the over-optimistic part of the episode split.
    """
    H, nX = mdp.H, mdp.num_states
    switch, a1, _ = _switch_table(f1, f2, u)
    xs = np.arange(nX)
    S = np.zeros((H + 1, nX))
    for h in range(H - 1, -1, -1):
        cont = mdp.P[h][xs, a1[h]] @ S[h + 1]
        S[h] = np.where(switch[h], 1.0, cont)
    return float(mdp.mu @ S[0])


def monte_carlo_exploration_value(
    mdp: EpisodicMdp,
    f1: np.ndarray,
    f2: np.ndarray,
    u: float,
    num_episodes: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """
    Monte-Carlo estimate (mean, standard error) of the exploration policy
    value, from vectorized rollouts of the switching rule.
    """
    switch, a1, a2 = _switch_table(f1, f2, u)
    n = num_episodes
    x = _sample_rows(np.broadcast_to(mdp.mu, (n, mdp.num_states)), rng)
    switched = np.zeros(n, dtype=bool)
    total = np.zeros(n)
    c = mdp.reward_scale
    for h in range(mdp.H):
        switched |= switch[h, x]
        a = np.where(switched, a2[h, x], a1[h, x])
        mean_r = mdp.R[h, x, a]
        if mdp.reward_noise == "deterministic":
            total += mean_r
        else:
            total += c * (rng.random(n) < mean_r / c)
        x = _sample_rows(mdp.P[h, x, a], rng)
    return float(np.mean(total)), float(np.std(total) / np.sqrt(n))


def _sample_rows(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one index per row of a row-stochastic array."""
    cdf = np.cumsum(probs, axis=1)
    draws = rng.random(probs.shape[0])[:, None]
    idx = np.sum(cdf <= draws, axis=1)
    return np.minimum(idx, probs.shape[1] - 1)


# SIMULATION #################################################################


def simulate_episode(
    mdp: EpisodicMdp,
    act: Callable[[int, int], int],
    rng: np.random.Generator,
) -> Trajectory:
    """
    Roll out one episode, asking `act(h, x)` for the action at each level.
    """
    states = np.zeros(mdp.H + 1, dtype=int)
    actions = np.zeros(mdp.H, dtype=int)
    rewards = np.zeros(mdp.H)
    states[0] = mdp.sample_initial(rng)
    for h in range(mdp.H):
        a = int(act(h, int(states[h])))
        if not 0 <= a < mdp.num_actions:
            raise ValueError(f"action {a} out of range at level {h}")
        actions[h] = a
        rewards[h], states[h + 1] = mdp.step(h, int(states[h]), a, rng)
    return Trajectory(states=states, actions=actions, rewards=rewards)
