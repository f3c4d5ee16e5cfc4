"""
bonus
=====

Subpackage for exploration bonuses.

Modules
-------
bonus_fn
    Evaluated bonus tables with provenance.
version_space
    Exact version-space bonus by enumeration.
elliptical
    Elliptical bonus for linear classes.
subsample
    Online sensitivity subsampling and its bonus.
consistency
    Running pointwise-min envelope of a bonus sequence.
bonus_oracle
    Oracles with a shared interface used by the learner.
bonus_exceptions
    Exceptions raised by the subpackage.
"""

from .bonus_exceptions import BonusError
from .bonus_fn import BonusFn, zero_bonus
from .bonus_oracle import (
    ORACLE_NAMES,
    SLOT_UNIT,
    SLOT_WEIGHTED,
    BonusOracle,
    ConsistentOracle,
    EllipticalOracle,
    SubsampleOracle,
    VersionSpaceOracle,
    ZeroOracle,
    make_oracle,
)
from .consistency import enforce_consistency
from .elliptical import bonus_from_gram, elliptical_bonus
from .subsample import (
    SUBSAMPLE_RADIUS_FACTOR,
    SubsampledSet,
    sampling_probability,
    sensitivity_update,
    subsample_bonus,
    subsample_capacity,
)
from .version_space import class_spread, vs_bonus

__all__ = [
    "BonusError",
    "BonusFn",
    "zero_bonus",
    "ORACLE_NAMES",
    "SLOT_UNIT",
    "SLOT_WEIGHTED",
    "BonusOracle",
    "ConsistentOracle",
    "EllipticalOracle",
    "SubsampleOracle",
    "VersionSpaceOracle",
    "ZeroOracle",
    "make_oracle",
    "enforce_consistency",
    "bonus_from_gram",
    "elliptical_bonus",
    "SUBSAMPLE_RADIUS_FACTOR",
    "SubsampledSet",
    "sampling_probability",
    "sensitivity_update",
    "subsample_bonus",
    "subsample_capacity",
    "class_spread",
    "vs_bonus",
]
