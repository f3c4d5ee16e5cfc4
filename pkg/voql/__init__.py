"""
voql
====

Variance-weighted optimistic Q-learning for episodic time-inhomogeneous MDPs
with finite and linear function classes, together with exact simulator
oracles that audit the structural properties of a run.

The learner fits optimistic, over-optimistic and over-pessimistic value
functions by (weighted) least squares over a function class, adds bonuses
from a bonus oracle, estimates the conditional variance of its targets to
reweight the optimistic regression, and explores by switching from the
optimistic to the over-optimistic greedy policy when the two disagree by
more than a threshold.


Usage
-----
    import numpy as np
    from voql import gen_linear_mdp, linear_family, make_oracle
    from voql import build_params, run

    mdp = gen_linear_mdp(d=3, H=4, nX=6, nA=3, seed=7)
    family = linear_family(mdp, T=200)
    oracle = make_oracle("elliptical")
    params = build_params(mdp, family, oracle, T=200)
    records = run(mdp, family, oracle, params, np.random.default_rng(0))

or from the command line, `voql run --config experiment.json`.


Subpackages
-----------
env
    Simulators, generators and exact dynamic-programming oracles.
fclass
    Function classes, covers and least-squares regression.
eluder
    Weighted uncertainty and the generalized Eluder dimension.
bonus
    Bonus oracles: version space, elliptical and sensitivity subsampling.
learner
    The learner: parameters, backward pass, variance weights, exploration.
verify
    Audits of run logs against the exact quantities of the instance.
harness
    Experiment configuration, baselines, result files and the CLI.
util
    Console output.
"""

from .bonus.bonus_oracle import (
    ConsistentOracle,
    EllipticalOracle,
    SubsampleOracle,
    VersionSpaceOracle,
    make_oracle,
)
from .eluder.eluder_dim import gen_eluder_dim
from .eluder.uncertainty import UncertaintyContext
from .env.dynamic_programming import (
    evaluate_exploration_policy,
    solve_optimal,
    true_conditional,
)
from .env.episodic_mdp import EpisodicMdp
from .env.generators import gen_linear_mdp, gen_tabular_mdp
from .fclass.class_family import (
    ClassFamily,
    finite_family,
    linear_family,
    tabular_family,
)
from .harness.config import ExperimentConfig, load_config
from .harness.experiment import run_experiment
from .learner.params import VoqlParams, build_params
from .learner.run_log import RunLog
from .learner.runner import RegretRecord, run
from .verify.checks import audit_log
from .verify.violation_report import ViolationReport

__all__ = [
    "ConsistentOracle",
    "EllipticalOracle",
    "SubsampleOracle",
    "VersionSpaceOracle",
    "make_oracle",
    "gen_eluder_dim",
    "UncertaintyContext",
    "evaluate_exploration_policy",
    "solve_optimal",
    "true_conditional",
    "EpisodicMdp",
    "gen_linear_mdp",
    "gen_tabular_mdp",
    "ClassFamily",
    "finite_family",
    "linear_family",
    "tabular_family",
    "ExperimentConfig",
    "load_config",
    "run_experiment",
    "VoqlParams",
    "build_params",
    "RunLog",
    "RegretRecord",
    "run",
    "audit_log",
    "ViolationReport",
]
