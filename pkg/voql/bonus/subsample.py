"""
subsample.py
============

Module containing online sensitivity subsampling with weights.

Each arriving point (z, sigma_bar) receives the weighted sensitivity score

    min(1, sup_{f1, f2} (f1(z) - f2(z))^2 / sigma_bar^2
              / (min(||f1 - f2||_S^2, T (H + 1)^2 / alpha^2) + beta^2))

against the current subsampled set S, where ||g||_S^2 sums
mult * g(z')^2 / sigma'^2 over the stored entries. With
tau = min(1, C * score * log(T N / delta)), the point is kept with
probability p = 1 / floor(1 / tau) and then stored with 1 / p copies.
A point with tau = 0 is never stored.

The bonus of a subsampled set is the version-space spread around f_hat with
radius 10 beta measured in ||.||_S.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..fclass.function_class import (
    FiniteClass,
    FunctionClass,
    ProductGridClass,
)
from ..fclass.linear_cover import LinearClass
from .bonus_exceptions import BonusError
from .bonus_fn import BonusFn
from .version_space import finite_spread, product_spread

SUBSAMPLE_RADIUS_FACTOR = 10.0


class SubsampledSet:
    """
    Distinct entries (z, sigma_bar) with positive integer multiplicities,
    and the running pairwise norms needed for sensitivity scores.
    """

    fclass: FunctionClass
    s_max: int
    overflow: int
    _keys: list[tuple[int, int, float]]
    _mult: dict[tuple[int, int, float], int]
    _tables: Optional[np.ndarray]
    _pair: np.ndarray
    _W: np.ndarray

    def __init__(self, fclass: FunctionClass, s_max: int) -> None:
        """
        Constructor for SubsampledSet.

        Parameters
        ----------
        fclass : FunctionClass
            Finite, product-grid or materialized linear class
        s_max : int
            Bound on the number of distinct entries; exceeding it is counted
            in `overflow`
        """
        self.fclass = fclass
        self.s_max = int(s_max)
        self.overflow = 0
        self._keys = []
        self._mult = {}
        self._tables = None
        if isinstance(fclass, ProductGridClass):
            self._W = np.zeros((fclass.num_states, fclass.num_actions))
        elif isinstance(fclass, FiniteClass):
            self._tables = fclass.tables
        elif isinstance(fclass, LinearClass):
            self._tables = fclass.as_finite(clip=False).tables
        else:
            raise BonusError(f"unsupported class {type(fclass).__name__}")
        if self._tables is not None:
            M = self._tables.shape[0]
            self._pair = np.zeros((M, M))

    def __len__(self) -> int:
        """Number of distinct entries."""
        return len(self._keys)

    @property
    def total_multiplicity(self) -> int:
        """Number of stored copies."""
        return int(sum(self._mult.values()))

    @property
    def weight_table(self) -> np.ndarray:
        """Per-entry sums of mult / sigma_bar^2 (product-grid classes)."""
        return self._W

    @property
    def member_tables(self) -> Optional[np.ndarray]:
        """Member stack used for pairwise norms (enumerable classes)."""
        return self._tables

    def add(self, x: int, a: int, sigma_bar: float, copies: int) -> None:
        """
        Store `copies` copies of (z, sigma_bar).
        """
        if copies < 1:
            raise ValueError("copies must be a positive integer")
        key = (int(x), int(a), float(sigma_bar))
        if key not in self._mult:
            if len(self._keys) >= self.s_max:
                self.overflow += 1
            self._keys.append(key)
            self._mult[key] = 0
        self._mult[key] += copies
        prec = copies / sigma_bar**2
        if self._tables is not None:
            v = self._tables[:, x, a]
            self._pair += (v[:, None] - v[None, :]) ** 2 * prec
        else:
            self._W[x, a] += prec

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Return (x, a, prec) with prec = mult / sigma_bar^2 per entry.
        """
        x = np.array([k[0] for k in self._keys], dtype=int)
        a = np.array([k[1] for k in self._keys], dtype=int)
        prec = np.array(
            [self._mult[k] / k[2] ** 2 for k in self._keys], dtype=float
        )
        return x, a, prec

    def entries(self) -> list[tuple[int, int, float, int]]:
        """
        Distinct entries (x, a, sigma_bar, multiplicity) in arrival order.
        """
        return [(k[0], k[1], k[2], self._mult[k]) for k in self._keys]

    def score(
        self, x: int, a: int, sigma_bar: float, beta: float, cap: float
    ) -> float:
        """
        Weighted sensitivity score of (z, sigma_bar) against the set.
        """
        if self._tables is not None:
            v = self._tables[:, x, a]
            num = (v[:, None] - v[None, :]) ** 2 / sigma_bar**2
            den = np.minimum(self._pair, cap) + beta**2
        else:
            L2 = self.fclass.L ** 2
            num = np.array(L2 / sigma_bar**2)
            den = np.array(min(self._W[x, a] * L2, cap) + beta**2)
        safe = np.where(den > 0, den, 1.0)
        ratio = np.where(
            den > 0, num / safe, np.where(num > 0, np.inf, 0.0)
        )
        return float(min(1.0, np.max(ratio)))


def sampling_probability(tau: float) -> float:
    """
    Smallest p >= tau with 1 / p a positive integer; 0 when tau <= 0.
    """
    if tau <= 0:
        return 0.0
    if tau >= 1:
        return 1.0
    k = int(np.floor(1.0 / tau + 1e-9))
    return 1.0 / k


def sensitivity_update(
    sset: SubsampledSet,
    z: tuple[int, int],
    sigma_bar: float,
    beta: float,
    alpha: float,
    C: float,
    delta: float,
    T: int,
    H: int,
    log_N: float,
    rng: np.random.Generator,
) -> bool:
    """
    Offer one point to the subsampled set; return True if it was stored.

    Parameters
    ----------
    sset : SubsampledSet
        The set, updated in place
    z : tuple[int, int]
        The point (x, a)
    sigma_bar : float
        Its weight, sigma_bar >= alpha
    beta : float
        Current confidence radius
    alpha : float
        Weight floor
    C : float
        Oversampling constant, C >= 1
    delta : float
        Failure probability
    T, H : int
        Number of episodes and horizon (truncation T (H + 1)^2 / alpha^2)
    log_N : float
        log of the class size
    rng : np.random.Generator
        Source of the keep/drop draw; one draw per call
    """
    if sigma_bar < alpha:
        raise BonusError(f"weight {sigma_bar} below the floor {alpha}")
    x, a = z
    cap = T * (H + 1) ** 2 / alpha**2
    score = sset.score(x, a, sigma_bar, beta, cap)
    log_term = np.log(T) + log_N - np.log(delta)
    tau = min(1.0, C * score * log_term)
    p = sampling_probability(tau)
    draw = rng.random()
    if p == 0.0 or draw >= p:
        return False
    sset.add(x, a, sigma_bar, int(round(1.0 / p)))
    return True


def subsample_bonus(
    sset: SubsampledSet,
    f_hat: int,
    beta: float,
    t: int = 0,
    h: int = 0,
) -> BonusFn:
    """
    Version-space spread around f_hat of radius 10 beta in the subsampled
    norm. An empty set puts every member in the version space.
    """
    if beta < 0 or not np.isfinite(beta):
        raise BonusError("beta must be finite and nonnegative")
    fclass = sset.fclass
    radius = SUBSAMPLE_RADIUS_FACTOR * beta
    x, a, prec = sset.arrays()
    if isinstance(fclass, ProductGridClass):
        table = product_spread(
            fclass, fclass.table(f_hat), sset.weight_table, radius
        )
    else:
        tables = sset.member_tables
        assert tables is not None
        center = f_hat
        if isinstance(fclass, LinearClass):
            assert fclass.member_index is not None
            center = int(np.searchsorted(fclass.member_index, f_hat))
        table = finite_spread(tables, center, x, a, prec, radius)
    return BonusFn(
        table,
        "subsample",
        t=t,
        h=h,
        beta=beta,
        n_data=sset.total_multiplicity,
        descriptor={
            "center": int(f_hat),
            "radius": radius,
            "entries": sset.entries(),
        },
    )


def subsample_capacity(
    C: float, T: int, log_N: float, delta: float, dim: float
) -> int:
    """
    Bound S_max = ceil(C * log(T N / delta) * dim) on the number of distinct
    subsampled entries.
    """
    log_term = np.log(T) + log_N - np.log(delta)
    return int(np.ceil(C * log_term * max(dim, 1.0)))
