"""
class_family.py
===============

Module containing the ClassFamily, the per-level value classes F^h together
with the second-moment classes used for the variance fit, and builders for
the standard families.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..env.episodic_mdp import EpisodicMdp
from ..env.env_exceptions import FeatureError
from .function_class import FiniteClass, FunctionClass, ProductGridClass
from .linear_cover import ENUMERATION_THRESHOLD, MEMBER_CAP, LinearClass

SECOND_MOMENT_FACTOR = 2.0


@dataclass
class ClassFamily:
    """
    Value classes F^h and second-moment classes, one per level.
    """

    value: list[FunctionClass]
    second: list[FunctionClass]

    def __post_init__(self) -> None:
        if len(self.value) != len(self.second):
            raise ValueError("need one second-moment class per level")
        if len(self.value) == 0:
            raise ValueError("a class family needs at least one level")

    @property
    def H(self) -> int:
        """Number of levels."""
        return len(self.value)

    @property
    def kind(self) -> str:
        """Kind of the value classes."""
        return self.value[0].kind

    @property
    def L(self) -> float:
        """Largest range bound of the value classes."""
        return max(f.L for f in self.value)

    def log_size(self) -> float:
        """log N with N = max_h |F^h| over value and second-moment classes."""
        return max(f.log_size() for f in self.value + self.second)

    def eluder_dim_bound(self, T: int, alpha: float, lam: float) -> float:
        """Largest per-level Eluder dimension estimate."""
        return max(f.eluder_dim_bound(T, alpha, lam) for f in self.value)


def tabular_family(
    mdp: EpisodicMdp,
    grid_step: float = 0.1,
    second_moment_factor: float = SECOND_MOMENT_FACTOR,
) -> ClassFamily:
    """
    Product-grid classes with range [0, 1] on every level.
    """
    value: list[FunctionClass] = [
        ProductGridClass(mdp.num_states, mdp.num_actions, 1.0, grid_step, h)
        for h in range(mdp.H)
    ]
    second = [f.enlarged(second_moment_factor) for f in value]
    return ClassFamily(value=value, second=second)


def linear_family(
    mdp: EpisodicMdp,
    eps_c: Optional[float] = None,
    T: int = 1,
    lam: float = 1.0,
    enumeration_threshold: int = ENUMERATION_THRESHOLD,
    member_cap: int = MEMBER_CAP,
    second_moment_factor: float = SECOND_MOMENT_FACTOR,
) -> ClassFamily:
    """
    Linear classes over the instance features with radius B^h.

    The cover radius defaults to sqrt(lam / (8 T)), the largest radius the
    elliptical bonus tolerates.
    """
    if mdp.phi is None or mdp.B is None:
        raise FeatureError("a linear family needs an instance with features")
    if eps_c is None:
        eps_c = float(np.sqrt(lam / (8 * T)))
    value: list[FunctionClass] = []
    second: list[FunctionClass] = []
    for h in range(mdp.H):
        B = float(mdp.B[h])
        value.append(
            LinearClass(
                mdp.phi[h], B, eps_c, h, enumeration_threshold, member_cap
            )
        )
        second.append(
            LinearClass(
                mdp.phi[h],
                B * second_moment_factor,
                eps_c,
                h,
                enumeration_threshold,
                member_cap,
            )
        )
    return ClassFamily(value=value, second=second)


def finite_family(
    tables: list[np.ndarray],
    L: float = 1.0,
    second_moment_factor: float = SECOND_MOMENT_FACTOR,
) -> ClassFamily:
    """
    Explicit finite classes, one table stack of shape (M, nX, nA) per level.
    """
    value: list[FunctionClass] = [
        FiniteClass(tab, L, h) for h, tab in enumerate(tables)
    ]
    second = [f.enlarged(second_moment_factor) for f in value]
    return ClassFamily(value=value, second=second)
