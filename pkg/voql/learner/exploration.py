"""
exploration.py
==============

Module containing the switching exploration rule: act greedily on f_1 while
max_a f_1(x, a) >= max_a f_2(x, a) - u_t, and greedily on f_2 from the first
level where this fails until the end of the episode.
"""

import numpy as np

from .voql_state import VoqlState


def should_switch(v1: float, v2: float, u: float) -> bool:
    """
    True if the optimistic value v1 trails the over-optimistic value v2 by
    more than u.
    """
    return bool(v1 < v2 - u)


def select_action(
    state: VoqlState, x: int, h: int, switched: bool
) -> tuple[int, bool]:
    """
    Action at state x and level h, and the updated switch flag.

    The first flip records h_t = h + 1 on the state. Argmax ties go to the
    lowest action index.
    """
    q1 = state.f1[h, x]
    q2 = state.f2[h, x]
    if not switched:
        if not should_switch(float(np.max(q1)), float(np.max(q2)), state.u):
            return int(np.argmax(q1)), False
        state.h_t = h + 1
    return int(np.argmax(q2)), True
