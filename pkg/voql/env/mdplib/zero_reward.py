"""
zero_reward.py
==============

Module containing the zero_reward function, which returns a random MDP that
never pays a reward (Q* = V* = 0).
"""

import numpy as np

from ..episodic_mdp import EpisodicMdp


def zero_reward(
    H: int = 3, nX: int = 3, nA: int = 2, seed: int = 0
) -> EpisodicMdp:
    """Returns a random zero-reward MDP."""
    rng = np.random.default_rng(seed)
    P = rng.dirichlet(np.ones(nX), size=(H, nX, nA))
    R = np.zeros((H, nX, nA))
    mu = np.full(nX, 1.0 / nX)
    return EpisodicMdp(P=P, R=R, mu=mu, name="zero_reward", seed=seed)
