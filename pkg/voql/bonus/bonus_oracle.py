"""
bonus_oracle.py
===============

Module containing the bonus oracles used by the learner. They share one
interface:

    prepare(family, T, H, alpha, delta, lam)    once before a run
    observe(h, slot, fclass, x, a, sigma, beta, rng)
                                                after each new data point
    bonus(h, slot, fclass, centers, data, weights, beta, t)
                                                bonus for episode t

The slot separates the two bonus sequences kept per level: slot 1 is built
from the sigma_bar-weighted data, slot 2 from unit weights. A bonus built for
several regression centers is the pointwise max of the per-center bonuses.

ConsistentOracle wraps any oracle with the running pointwise-min envelope
per (level, slot) and counts the raw consistency violations.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..eluder.gram_inverse import GramInverse
from ..fclass.class_family import ClassFamily
from ..fclass.function_class import FunctionClass
from ..fclass.level_dataset import LevelDataset
from ..fclass.linear_cover import LinearClass
from .bonus_exceptions import BonusError
from .bonus_fn import BonusFn, zero_bonus
from .consistency import enforce_consistency
from .elliptical import bonus_from_gram
from .subsample import (
    SubsampledSet,
    sensitivity_update,
    subsample_bonus,
    subsample_capacity,
)
from .version_space import vs_bonus

SLOT_WEIGHTED = 1
SLOT_UNIT = 2
ORACLE_NAMES = ("vs", "elliptical", "subsample", "zero")


class BonusOracle:
    """
    Base class of the bonus oracles.

    Attributes
    ----------
    name : str
        Oracle label
    eps_b : float
        Additive slack of the oracle's cap property
    cap_constant : float
        Constant C of the cap b <= C (D sqrt(beta^2 + lam) + eps_b beta)
    center_dependent : bool
        False if the bonus ignores the regression center
    """

    name: str = "base"
    cap_constant: float = 1.0
    center_dependent: bool = True
    eps_b: float
    T: int
    H: int
    alpha: float
    delta: float
    lam: float
    log_N: float

    def __init__(self) -> None:
        self.eps_b = 0.0
        self.T = 1
        self.H = 1
        self.alpha = 1.0
        self.delta = 0.1
        self.lam = 1.0
        self.log_N = 0.0

    def prepare(
        self,
        family: ClassFamily,
        T: int,
        H: int,
        alpha: float,
        delta: float,
        lam: float,
    ) -> None:
        """
        Record the run constants.
        """
        self.check_family(family)
        self.T = T
        self.H = H
        self.alpha = alpha
        self.delta = delta
        self.lam = lam
        self.log_N = family.log_size()

    def check_family(self, family: ClassFamily) -> None:
        """
        Raise BonusError if the oracle cannot build bonuses over the value
        classes of `family`.
        """

    def observe(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        x: int,
        a: int,
        sigma: float,
        beta: float,
        rng: np.random.Generator,
    ) -> None:
        """
        Feed one new data point to the oracle's running state.
        """

    def bonus(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        centers: Sequence[int],
        data: LevelDataset,
        weights: np.ndarray,
        beta: float,
        t: int,
    ) -> BonusFn:
        """
        Bonus for episode t at level h.
        """
        raise NotImplementedError

    def log_class_size(self, family: ClassFamily, beta_max: float) -> float:
        """
        Estimate of log N_b, the log covering number of the bonus class.
        """
        raise NotImplementedError

    def _capacity(self, family: ClassFamily) -> int:
        dim = family.eluder_dim_bound(self.T, self.alpha, self.lam)
        return subsample_capacity(1.0, self.T, self.log_N, self.delta, dim)

    def _set_class_size(self, family: ClassFamily, s_max: int) -> float:
        nz = family.value[0].num_states * family.value[0].num_actions
        return float(s_max * (np.log(nz) + np.log(self.T / self.alpha)))


class VersionSpaceOracle(BonusOracle):
    """
    Exact version-space sup by enumeration; eps_b = 0, C = 1.
    """

    name = "vs"
    cap_constant = 1.0

    def bonus(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        centers: Sequence[int],
        data: LevelDataset,
        weights: np.ndarray,
        beta: float,
        t: int,
    ) -> BonusFn:
        bonuses = [
            vs_bonus(fclass, c, data, beta, weights, t=t, h=h)
            for c in centers
        ]
        return _pointwise_max(bonuses)

    def check_family(self, family: ClassFamily) -> None:
        _check_enumerable(family, self.name)

    def log_class_size(self, family: ClassFamily, beta_max: float) -> float:
        return self._set_class_size(family, self._capacity(family))


class ZeroOracle(BonusOracle):
    """
    Zero bonus everywhere. Breaks optimism; used as a negative control for
    the invariant audits.
    """

    name = "zero"
    center_dependent = False

    def bonus(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        centers: Sequence[int],
        data: LevelDataset,
        weights: np.ndarray,
        beta: float,
        t: int,
    ) -> BonusFn:
        shape = (fclass.num_states, fclass.num_actions)
        return zero_bonus(shape, t=t, h=h)

    def log_class_size(self, family: ClassFamily, beta_max: float) -> float:
        return 0.0


class EllipticalOracle(BonusOracle):
    """
    Elliptical bonus for linear classes with an incrementally maintained
    Gram inverse per (level, slot); eps_b = eps_c.
    """

    name = "elliptical"
    cap_constant = 2.0
    center_dependent = False
    grams: dict[tuple[int, int], GramInverse]

    def __init__(self) -> None:
        super().__init__()
        self.grams = {}

    def prepare(
        self,
        family: ClassFamily,
        T: int,
        H: int,
        alpha: float,
        delta: float,
        lam: float,
    ) -> None:
        super().prepare(family, T, H, alpha, delta, lam)
        self.eps_b = max(_linear(f).eps_c for f in family.value)
        self.grams = {}

    def check_family(self, family: ClassFamily) -> None:
        if not all(isinstance(f, LinearClass) for f in family.value):
            raise BonusError("the elliptical oracle needs linear classes")

    def _gram(self, h: int, slot: int, fclass: FunctionClass) -> GramInverse:
        key = (h, slot)
        if key not in self.grams:
            lin = _linear(fclass)
            if lin.B == 0:
                raise BonusError(f"level {h} class has a zero radius")
            self.grams[key] = GramInverse(lin.d, self.lam / (4 * lin.B**2))
        return self.grams[key]

    def observe(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        x: int,
        a: int,
        sigma: float,
        beta: float,
        rng: np.random.Generator,
    ) -> None:
        lin = _linear(fclass)
        self._gram(h, slot, fclass).update(lin.phi[x, a], 1.0 / sigma**2)

    def bonus(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        centers: Sequence[int],
        data: LevelDataset,
        weights: np.ndarray,
        beta: float,
        t: int,
    ) -> BonusFn:
        gram = self._gram(h, slot, fclass)
        if gram.num_updates != len(data):
            raise BonusError(
                f"oracle saw {gram.num_updates} points, data has {len(data)}"
            )
        return bonus_from_gram(_linear(fclass).phi, gram, beta, self.lam, t, h)

    def log_class_size(self, family: ClassFamily, beta_max: float) -> float:
        out = 0.0
        for f in family.value:
            lin = _linear(f)
            d, eps = lin.d, lin.eps_c
            size = d * np.log1p(4 * lin.B / eps) + d**2 * np.log1p(
                8 * np.sqrt(d) * beta_max**2 / (self.lam * eps**2)
            )
            out = max(out, float(size))
        return out


class SubsampleOracle(BonusOracle):
    """
    Version-space spread over an online sensitivity subsample per
    (level, slot); eps_b = 0, C = 100.
    """

    name = "subsample"
    cap_constant = 100.0
    C: float
    s_max: int
    sets: dict[tuple[int, int], SubsampledSet]

    def __init__(self, C: float = 1.0) -> None:
        super().__init__()
        if C < 1:
            raise ValueError("the oversampling constant C must be >= 1")
        self.C = float(C)
        self.s_max = 1
        self.sets = {}

    def prepare(
        self,
        family: ClassFamily,
        T: int,
        H: int,
        alpha: float,
        delta: float,
        lam: float,
    ) -> None:
        super().prepare(family, T, H, alpha, delta, lam)
        dim = family.eluder_dim_bound(T, alpha, lam)
        self.s_max = subsample_capacity(self.C, T, self.log_N, delta, dim)
        self.sets = {}

    def check_family(self, family: ClassFamily) -> None:
        _check_enumerable(family, self.name)

    def _set(self, h: int, slot: int, fclass: FunctionClass) -> SubsampledSet:
        key = (h, slot)
        if key not in self.sets:
            self.sets[key] = SubsampledSet(fclass, self.s_max)
        return self.sets[key]

    def observe(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        x: int,
        a: int,
        sigma: float,
        beta: float,
        rng: np.random.Generator,
    ) -> None:
        sensitivity_update(
            self._set(h, slot, fclass),
            (x, a),
            sigma,
            beta,
            self.alpha,
            self.C,
            self.delta,
            self.T,
            self.H,
            self.log_N,
            rng,
        )

    def bonus(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        centers: Sequence[int],
        data: LevelDataset,
        weights: np.ndarray,
        beta: float,
        t: int,
    ) -> BonusFn:
        sset = self._set(h, slot, fclass)
        bonuses = [subsample_bonus(sset, c, beta, t=t, h=h) for c in centers]
        return _pointwise_max(bonuses)

    def log_class_size(self, family: ClassFamily, beta_max: float) -> float:
        return self._set_class_size(family, self.s_max)

    def distinct_counts(self, H: int) -> np.ndarray:
        """
        Distinct subsampled entries per (level, slot), shape (H, 2).
        """
        out = np.zeros((H, 2), dtype=int)
        for (h, slot), sset in self.sets.items():
            out[h, slot - 1] = len(sset)
        return out


class ConsistentOracle:
    """
    Wraps an oracle with the running pointwise-min envelope per
    (level, slot). The raw bonuses of the latest call are kept for logging.
    """

    inner: BonusOracle
    previous: dict[tuple[int, int], BonusFn]
    last_raw: dict[tuple[int, int], BonusFn]
    raw_violations: int

    def __init__(self, inner: BonusOracle) -> None:
        self.inner = inner
        self.previous = {}
        self.last_raw = {}
        self.raw_violations = 0

    @property
    def name(self) -> str:
        """Name of the wrapped oracle."""
        return self.inner.name

    @property
    def eps_b(self) -> float:
        """Additive slack of the wrapped oracle."""
        return self.inner.eps_b

    @property
    def cap_constant(self) -> float:
        """Cap constant of the wrapped oracle."""
        return self.inner.cap_constant

    def prepare(
        self,
        family: ClassFamily,
        T: int,
        H: int,
        alpha: float,
        delta: float,
        lam: float,
    ) -> None:
        """
        Reset the envelope and prepare the wrapped oracle.
        """
        self.previous = {}
        self.last_raw = {}
        self.raw_violations = 0
        self.inner.prepare(family, T, H, alpha, delta, lam)

    def check_family(self, family: ClassFamily) -> None:
        """
        Raise BonusError if the wrapped oracle cannot serve `family`.
        """
        self.inner.check_family(family)

    def observe(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        x: int,
        a: int,
        sigma: float,
        beta: float,
        rng: np.random.Generator,
    ) -> None:
        """
        Forward a data point to the wrapped oracle.
        """
        self.inner.observe(h, slot, fclass, x, a, sigma, beta, rng)

    def bonus(
        self,
        h: int,
        slot: int,
        fclass: FunctionClass,
        centers: Sequence[int],
        data: LevelDataset,
        weights: np.ndarray,
        beta: float,
        t: int,
    ) -> BonusFn:
        """
        Enveloped bonus for episode t at level h.
        """
        raw = self.inner.bonus(
            h, slot, fclass, centers, data, weights, beta, t
        )
        key = (h, slot)
        env = enforce_consistency(raw, self.previous.get(key))
        self.raw_violations += env.raw_violations
        self.previous[key] = env
        self.last_raw[key] = raw
        return env

    def log_class_size(self, family: ClassFamily, beta_max: float) -> float:
        """
        Estimate of log N_b from the wrapped oracle.
        """
        return self.inner.log_class_size(family, beta_max)


def make_oracle(name: str, C_sens: float = 1.0) -> ConsistentOracle:
    """
    Build an enveloped oracle by name ("vs", "elliptical", "subsample", or
    "zero").
    """
    inner: Optional[BonusOracle] = None
    if name == "vs":
        inner = VersionSpaceOracle()
    elif name == "elliptical":
        inner = EllipticalOracle()
    elif name == "subsample":
        inner = SubsampleOracle(C_sens)
    elif name == "zero":
        inner = ZeroOracle()
    else:
        raise BonusError(f"unknown oracle '{name}', expected {ORACLE_NAMES}")
    return ConsistentOracle(inner)


def _check_enumerable(family: ClassFamily, name: str) -> None:
    # version-space spreads enumerate linear covers
    for f in family.value:
        if isinstance(f, LinearClass) and not f.is_materialized:
            raise BonusError(
                f"the {name} oracle needs a materialized cover, but level "
                + f"{f.h} has about {f.cover_size:.3e} members, above the "
                + f"enumeration threshold {f.enumeration_threshold}"
            )


def _linear(fclass: FunctionClass) -> LinearClass:
    if not isinstance(fclass, LinearClass):
        raise BonusError("the elliptical oracle needs linear classes")
    return fclass


def _pointwise_max(bonuses: list[BonusFn]) -> BonusFn:
    if len(bonuses) == 0:
        raise BonusError("need at least one regression center")
    if len(bonuses) == 1:
        return bonuses[0]
    first = bonuses[0]
    table = np.max(np.stack([b.table for b in bonuses]), axis=0)
    descriptor = dict(first.descriptor)
    descriptor["center"] = [b.descriptor.get("center") for b in bonuses]
    return BonusFn(
        table,
        first.kind,
        t=first.t,
        h=first.h,
        beta=first.beta,
        n_data=first.n_data,
        descriptor=descriptor,
    )
