"""
build_instances.py
==================

Small instances, function classes and datasets shared by the tests.
"""

import numpy as np

from voql.env import EpisodicMdp, gen_linear_mdp, gen_tabular_mdp
from voql.fclass import FiniteClass, LevelDataset

REFERENCE_LINEAR = {"d": 3, "H": 4, "nX": 6, "nA": 3, "seed": 7}


def reference_linear_mdp() -> EpisodicMdp:
    """The linear instance (d, H, nX, nA, seed) = (3, 4, 6, 3, 7)."""
    return gen_linear_mdp(**REFERENCE_LINEAR)


def small_tabular_mdp(seed: int = 0) -> EpisodicMdp:
    """Random tabular instance with H = 3, nX = 4, nA = 2."""
    return gen_tabular_mdp(H=3, nX=4, nA=2, seed=seed)


def coin_mdp() -> EpisodicMdp:
    """
    One level, two states and two actions; the next state is a fair coin
    and no reward is paid.
    """
    P = np.full((1, 2, 2, 2), 0.5)
    R = np.zeros((1, 2, 2))
    mu = np.array([1.0, 0.0])
    return EpisodicMdp(P=P, R=R, mu=mu, name="coin")


def single_point_class(values: list[float], L: float = 1.0) -> FiniteClass:
    """Finite class over a single state-action pair."""
    tables = np.array(values, dtype=float).reshape(-1, 1, 1)
    return FiniteClass(tables, L=L)


def random_finite_class(
    size: int, nX: int, nA: int, seed: int, L: float = 1.0
) -> FiniteClass:
    """Finite class of `size` tables uniform in [0, L]."""
    rng = np.random.default_rng(seed)
    return FiniteClass(rng.uniform(0.0, L, size=(size, nX, nA)), L=L)


def random_dataset(
    n: int,
    nX: int,
    nA: int,
    seed: int,
    alpha: float = 0.5,
    sigma_range: tuple[float, float] = (0.5, 2.0),
) -> LevelDataset:
    """
    Dataset of n random points with rewards in [0, 1] and weights drawn
    uniformly from sigma_range.
    """
    rng = np.random.default_rng(seed)
    data = LevelDataset(alpha)
    for _ in range(n):
        data.append(
            int(rng.integers(nX)),
            int(rng.integers(nA)),
            float(rng.random()),
            int(rng.integers(nX)),
            float(rng.uniform(*sigma_range)),
        )
    return data
