"""
two_state_chain.py
==================

Module containing the two_state_chain function, which returns a 2-state,
2-action MDP of horizon 2 whose only reward is collected in state 1 at the
last level.

Starting in state 0, the optimal first action reaches state 1 with
probability max(p_reach) and that is also V*^1(0).
"""

import numpy as np

from ..episodic_mdp import EpisodicMdp

# Pr(x^2 = 1 | x^1, a^1)
P_REACH = np.array(
    [
        [0.3, 0.6],  # from state 0
        [0.5, 0.9],  # from state 1
    ]
)


def two_state_chain(p_reach: np.ndarray = P_REACH) -> EpisodicMdp:
    """Returns the two-state chain."""
    p_reach = np.asarray(p_reach, dtype=float)
    P = np.zeros((2, 2, 2, 2))
    P[0, :, :, 1] = p_reach
    P[0, :, :, 0] = 1.0 - p_reach
    # last-level transitions are never used; keep the chain where it is
    P[1, 0, :, 0] = 1.0
    P[1, 1, :, 1] = 1.0
    R = np.zeros((2, 2, 2))
    R[1, 1, :] = 1.0
    mu = np.array([1.0, 0.0])
    return EpisodicMdp(P=P, R=R, mu=mu, name="two_state_chain")
