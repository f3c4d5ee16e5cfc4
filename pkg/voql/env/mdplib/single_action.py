"""
single_action.py
================

Module containing the single_action function, which returns a random MDP
with one action. Every policy is optimal, so any learner has zero regret.
"""

import numpy as np

from ..episodic_mdp import EpisodicMdp


def single_action(H: int = 3, nX: int = 3, seed: int = 0) -> EpisodicMdp:
    """Returns a random single-action MDP."""
    rng = np.random.default_rng(seed)
    P = rng.dirichlet(np.ones(nX), size=(H, nX, 1))
    R = np.zeros((H, nX, 1))
    R[H - 1] = rng.uniform(0.0, 1.0, size=(nX, 1))
    mu = np.full(nX, 1.0 / nX)
    return EpisodicMdp(P=P, R=R, mu=mu, name="single_action", seed=seed)
