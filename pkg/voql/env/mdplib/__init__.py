"""
mdplib
======

Subpackage containing small hand-built episodic MDPs used in tests and
examples.

Modules
-------
two_state_chain
deterministic_chain
single_action
zero_reward
"""

from .deterministic_chain import deterministic_chain
from .single_action import single_action
from .two_state_chain import two_state_chain
from .zero_reward import zero_reward

__all__ = [
    "deterministic_chain",
    "single_action",
    "two_state_chain",
    "zero_reward",
]
