"""
env
===

Subpackage for episodic MDP simulators and their exact oracles.

Modules
-------
episodic_mdp
    EpisodicMdp class: kernels, rewards, features, sampling and JSON i/o.
generators
    Seeded generators for random linear and tabular instances.
dynamic_programming
    Exact DP oracles: optimal values, conditional moments, policy values,
    the switching exploration policy, simulation.
env_exceptions
    Exceptions for the env subpackage.

Subpackages
-----------
mdplib
    Small hand-built instances.
"""

from . import mdplib
from .dynamic_programming import (
    OptimalSolution,
    Trajectory,
    bellman_backup,
    conditional_moments,
    evaluate_exploration_policy,
    expected_total_variance,
    greedy_policy,
    monte_carlo_exploration_value,
    occupancy,
    policy_value,
    simulate_episode,
    solve_optimal,
    switch_probability,
    true_conditional,
    uniform_policy,
)
from .env_exceptions import FeatureError, GeneratorError, InvalidMdpError
from .episodic_mdp import EpisodicMdp
from .generators import embed_one_hot, gen_linear_mdp, gen_tabular_mdp

__all__ = [
    "mdplib",
    "EpisodicMdp",
    "OptimalSolution",
    "Trajectory",
    "bellman_backup",
    "conditional_moments",
    "evaluate_exploration_policy",
    "expected_total_variance",
    "greedy_policy",
    "monte_carlo_exploration_value",
    "occupancy",
    "policy_value",
    "simulate_episode",
    "solve_optimal",
    "switch_probability",
    "true_conditional",
    "uniform_policy",
    "embed_one_hot",
    "gen_linear_mdp",
    "gen_tabular_mdp",
    "FeatureError",
    "GeneratorError",
    "InvalidMdpError",
]
