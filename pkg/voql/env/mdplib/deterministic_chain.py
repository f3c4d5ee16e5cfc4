"""
deterministic_chain.py
======================

Module containing the deterministic_chain function, which returns a chain
with deterministic transitions: action 0 moves one state to the right (the
last state absorbs), action 1 stays. A unit reward is paid at the last level
in the last state, so V*^1(0) = 1 iff H >= nX.
"""

import numpy as np

from ..episodic_mdp import EpisodicMdp


def deterministic_chain(H: int = 3, nX: int = 3) -> EpisodicMdp:
    """Returns the deterministic chain."""
    if H < 1 or nX < 2:
        raise ValueError("need H >= 1 and nX >= 2")
    P = np.zeros((H, nX, 2, nX))
    for x in range(nX):
        P[:, x, 0, min(x + 1, nX - 1)] = 1.0
        P[:, x, 1, x] = 1.0
    R = np.zeros((H, nX, 2))
    R[H - 1, nX - 1, :] = 1.0
    mu = np.zeros(nX)
    mu[0] = 1.0
    return EpisodicMdp(P=P, R=R, mu=mu, name=f"deterministic_chain_H{H}")
