"""
bonus_fn.py
===========

Module containing the BonusFn class, a nonnegative bonus function on the
(x, a) grid together with its provenance and a compact descriptor.
"""

from __future__ import annotations

from typing import Any, Optional

import numpy as np

from .bonus_exceptions import BonusError

BONUS_KINDS = ("vs", "elliptical", "subsample", "envelope", "constant")


class BonusFn:
    """
    Bonus b(x, a) >= 0, stored as a table over the finite (x, a) grid.

    Attributes
    ----------
    table : np.ndarray
        Bonus values, shape (nX, nA)
    kind : str
        Oracle that produced it
    t, h : int
        Episode and level it was built for
    beta : float
        Confidence radius used
    n_data : int
        Number of data points it was built from
    descriptor : dict
        Parameters that determine the table (covariance and scale, subsampled
        set, regression center, ...)
    raw_violations : int
        Entries where a consistency envelope lowered the raw bonus
    """

    table: np.ndarray
    kind: str
    t: int
    h: int
    beta: float
    n_data: int
    descriptor: dict[str, Any]
    raw_violations: int

    def __init__(
        self,
        table: np.ndarray,
        kind: str,
        t: int = 0,
        h: int = 0,
        beta: float = 0.0,
        n_data: int = 0,
        descriptor: Optional[dict[str, Any]] = None,
        raw_violations: int = 0,
    ) -> None:
        if kind not in BONUS_KINDS:
            raise BonusError(f"unknown bonus kind '{kind}'")
        table = np.array(table, dtype=float)
        if table.ndim != 2:
            raise BonusError("bonus table must have shape (nX, nA)")
        if not np.all(np.isfinite(table)):
            raise BonusError("bonus values must be finite")
        if np.any(table < 0):
            raise BonusError("bonus values must be nonnegative")
        self.table = table
        self.table.setflags(write=False)
        self.kind = kind
        self.t = t
        self.h = h
        self.beta = float(beta)
        self.n_data = n_data
        self.descriptor = descriptor if descriptor is not None else {}
        self.raw_violations = raw_violations

    def __call__(self, x: int, a: int) -> float:
        return float(self.table[x, a])

    def __str__(self) -> str:
        return (
            f"BonusFn({self.kind}, t={self.t}, h={self.h}, "
            + f"beta={self.beta:.4g}, max={np.max(self.table):.4g})"
        )

    def to_dict(self) -> dict[str, Any]:
        """
        JSON-serializable description; arrays in the descriptor become
        nested lists.
        """
        desc = {
            k: v.tolist() if isinstance(v, np.ndarray) else v
            for k, v in self.descriptor.items()
        }
        return {
            "kind": self.kind,
            "t": self.t,
            "h": self.h,
            "beta": self.beta,
            "n_data": self.n_data,
            "raw_violations": self.raw_violations,
            "table": self.table.tolist(),
            "descriptor": desc,
        }


def zero_bonus(shape: tuple[int, int], t: int = 0, h: int = 0) -> BonusFn:
    """
    The zero bonus.
    """
    return BonusFn(np.zeros(shape), "constant", t=t, h=h)
