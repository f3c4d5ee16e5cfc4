"""
voql_state.py
=============

Module containing the VoqlState class, the mutable state of one run: the
per-level datasets, the uncertainty histories and the value functions of the
current episode.
"""

from typing import Optional

import numpy as np

from ..bonus.bonus_fn import BonusFn
from ..eluder.uncertainty import UncertaintyContext
from ..fclass.class_family import ClassFamily
from ..fclass.level_dataset import LevelDataset
from .params import VoqlParams


class VoqlState:
    """
    State of a run, owned by a single writer.

    Value tables are stored with H + 1 levels; level H is the boundary and
    stays identically zero. The switch level h_t is 1-based, with H + 1
    meaning that the episode never switched.

    Attributes
    ----------
    family : ClassFamily
        Value and second-moment classes
    params : VoqlParams
        Run constants
    t : int
        Current episode, 1-based; 0 before the first episode
    u : float
        Switching threshold of the current episode
    datasets : list[LevelDataset]
        Observed transitions with their weights sigma_bar, per level
    unit_ctx, weighted_ctx : list[UncertaintyContext]
        Histories of visited points with unit and sigma_bar weights
    f1, f2, fm2 : np.ndarray
        Optimistic, over-optimistic and over-pessimistic Q tables,
        shape (H + 1, nX, nA)
    fhat1, fhat2, fhat_m2, ghat : np.ndarray
        Regression fits, shape (H, nX, nA)
    centers : list[tuple[int, int, int, int]]
        Member indices of (fhat1, fhat2, fhat_m2, ghat), per level; product
        grid indices exceed 64 bits, so they stay Python ints
    b1, b2 : list[Optional[BonusFn]]
        Enveloped bonuses of the current episode
    h_t : int
        Switch level of the current episode
    """

    family: ClassFamily
    params: VoqlParams
    t: int
    u: float
    datasets: list[LevelDataset]
    unit_ctx: list[UncertaintyContext]
    weighted_ctx: list[UncertaintyContext]
    f1: np.ndarray
    f2: np.ndarray
    fm2: np.ndarray
    fhat1: np.ndarray
    fhat2: np.ndarray
    fhat_m2: np.ndarray
    ghat: np.ndarray
    centers: list[tuple[int, int, int, int]]
    b1: list[Optional[BonusFn]]
    b2: list[Optional[BonusFn]]
    h_t: int

    def __init__(self, family: ClassFamily, params: VoqlParams) -> None:
        """
        Constructor for VoqlState class.

        Parameters
        ----------
        family : ClassFamily
            Value and second-moment classes, one per level
        params : VoqlParams
            Run constants; params.H must match the family
        """
        if family.H != params.H:
            raise ValueError(
                f"family has {family.H} levels, params has H = {params.H}"
            )
        self.family = family
        self.params = params
        H = params.H
        nX = family.value[0].num_states
        nA = family.value[0].num_actions
        self.t = 0
        self.u = np.inf
        self.datasets = [LevelDataset(params.alpha) for _ in range(H)]
        self.unit_ctx = [
            UncertaintyContext(f, params.lam) for f in family.value
        ]
        self.weighted_ctx = [
            UncertaintyContext(f, params.lam, params.alpha)
            for f in family.value
        ]
        self.f1 = np.zeros((H + 1, nX, nA))
        self.f2 = np.zeros((H + 1, nX, nA))
        self.fm2 = np.zeros((H + 1, nX, nA))
        self.fhat1 = np.zeros((H, nX, nA))
        self.fhat2 = np.zeros((H, nX, nA))
        self.fhat_m2 = np.zeros((H, nX, nA))
        self.ghat = np.zeros((H, nX, nA))
        self.centers = [(0, 0, 0, 0)] * H
        self.b1 = [None] * H
        self.b2 = [None] * H
        self.h_t = H + 1

    @property
    def H(self) -> int:
        """Horizon."""
        return self.params.H

    @property
    def shape(self) -> tuple[int, int]:
        """(nX, nA)."""
        return (self.f1.shape[1], self.f1.shape[2])

    def begin_episode(self, t: int) -> None:
        """
        Advance to episode t and reset the switch level.
        """
        if t != self.t + 1:
            raise ValueError(f"episode {t} does not follow {self.t}")
        self.t = t
        self.u = self.params.u(t)
        self.h_t = self.H + 1

    def record(
        self,
        h: int,
        x: int,
        a: int,
        r: float,
        x_next: int,
        sigma_bar: float,
    ) -> None:
        """
        Append a visited transition at level h to the dataset and to both
        uncertainty histories.
        """
        self.datasets[h].append(x, a, r, x_next, sigma_bar)
        self.unit_ctx[h].append(x, a, 1.0)
        self.weighted_ctx[h].append(x, a, sigma_bar)

    def check_boundary(self) -> bool:
        """
        True if the boundary level is zero and every clip range holds.
        """
        H = self.H
        if np.any(self.f1[H] != 0) or np.any(self.f2[H] != 0):
            return False
        if np.any(self.fm2[H] != 0):
            return False
        ok = np.all((self.f1 >= 0) & (self.f1 <= 1))
        ok &= np.all((self.f2 >= 0) & (self.f2 <= 2))
        ok &= np.all((self.fm2 >= 0) & (self.fm2 <= self.params.L))
        return bool(ok)
