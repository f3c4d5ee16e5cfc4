"""
consistency.py
==============

Module containing enforce_consistency, the running pointwise-min envelope
that makes a bonus sequence element-wise non-increasing in t.
"""

from typing import Optional

import numpy as np

from .bonus_exceptions import BonusError
from .bonus_fn import BonusFn


def enforce_consistency(
    current: BonusFn, previous: Optional[BonusFn]
) -> BonusFn:
    """
    Pointwise min(current, previous).

    The returned bonus keeps the provenance of `current` and records in
    `raw_violations` the number of entries where `current` exceeded
    `previous`. Without a previous bonus, `current` is returned unchanged.
    """
    if previous is None:
        return current
    if current.table.shape != previous.table.shape:
        raise BonusError("bonus tables differ in shape")
    if previous.h != current.h:
        raise BonusError("consistency is enforced per level")
    if current.t <= previous.t and (current.t, previous.t) != (0, 0):
        raise BonusError(
            f"bonus of episode {current.t} cannot follow episode {previous.t}"
        )
    raw_violations = int(np.sum(current.table > previous.table))
    descriptor = dict(current.descriptor)
    descriptor["envelope_of"] = previous.t
    return BonusFn(
        np.minimum(current.table, previous.table),
        current.kind,
        t=current.t,
        h=current.h,
        beta=current.beta,
        n_data=current.n_data,
        descriptor=descriptor,
        raw_violations=raw_violations,
    )
