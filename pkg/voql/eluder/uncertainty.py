"""
uncertainty.py
==============

Module containing the UncertaintyContext class, which evaluates the weighted
uncertainty width

    D^2(z; z_[t-1], sigma_[t-1]) = sup_{f1, f2 in F} (f1(z) - f2(z))^2 /
        (sum_s (f1(z_s) - f2(z_s))^2 / sigma_s^2 + lam)

online, with running state per class kind:

    finite      per-pair history sums, so a query costs O(|F|^2)
    product     per-entry weight sums; the sup is attained by two members
                that differ by L at z only
    linear      elliptical form D = 2 ||phi(z)||_{Sigma^{-1}} with
                Sigma = lam / (4 B^2) I + sum_s phi_s phi_s^T / sigma_s^2
"""

from __future__ import annotations

import copy

import numpy as np

from ..fclass.function_class import (
    FiniteClass,
    FunctionClass,
    ProductGridClass,
)
from ..fclass.linear_cover import LinearClass
from .gram_inverse import GramInverse

# rows per block of the pair-sum matrix
PAIR_BLOCK = 1024


class UncertaintyContext:
    """
    History (z_s, sigma_s) with the running sums needed to evaluate D^2.

    Owned mutable state: appends must not interleave with queries from
    another thread.
    """

    fclass: FunctionClass
    lam: float
    alpha: float
    degenerate: bool
    num_points: int
    _pair: np.ndarray
    _W: np.ndarray
    _gram: GramInverse

    def __init__(
        self, fclass: FunctionClass, lam: float = 1.0, alpha: float = 0.0
    ) -> None:
        """
        Constructor for UncertaintyContext.

        Parameters
        ----------
        fclass : FunctionClass
            The class F
        lam : float, optional
            Regularizer lam > 0, by default 1.0
        alpha : float, optional
            Floor the history weights must respect, by default 0
        """
        if not lam > 0:
            raise ValueError("lam must be positive")
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        self.fclass = fclass
        self.lam = float(lam)
        self.alpha = float(alpha)
        self.num_points = 0
        self.degenerate = fclass.size < 2
        if isinstance(fclass, FiniteClass):
            self._pair = np.zeros((fclass.size, fclass.size))
        elif isinstance(fclass, ProductGridClass):
            self._W = np.zeros((fclass.num_states, fclass.num_actions))
        elif isinstance(fclass, LinearClass):
            if not self.degenerate:
                reg = self.lam / (4 * fclass.B**2)
                self._gram = GramInverse(fclass.d, reg)
        else:
            raise TypeError(f"unsupported class {type(fclass).__name__}")

    def append(self, x: int, a: int, sigma: float) -> None:
        """
        Append the point z = (x, a) with weight sigma.
        """
        if not sigma > 0 or sigma < self.alpha:
            raise ValueError(f"weight {sigma} below the floor {self.alpha}")
        self.num_points += 1
        if self.degenerate:
            return
        inv_s2 = 1.0 / sigma**2
        fc = self.fclass
        if isinstance(fc, FiniteClass):
            v = fc.tables[:, x, a]
            for start in range(0, v.shape[0], PAIR_BLOCK):
                block = v[start : start + PAIR_BLOCK]
                diff = block[:, None] - v[None, :]
                self._pair[start : start + PAIR_BLOCK] += diff**2 * inv_s2
        elif isinstance(fc, ProductGridClass):
            self._W[x, a] += inv_s2
        elif isinstance(fc, LinearClass):
            self._gram.update(fc.phi[x, a], inv_s2)

    def dsq(self, x: int, a: int) -> float:
        """
        D^2 at z = (x, a); zero when the class has fewer than two members.
        """
        if self.degenerate:
            return 0.0
        fc = self.fclass
        if isinstance(fc, FiniteClass):
            v = fc.tables[:, x, a]
            best = 0.0
            for start in range(0, v.shape[0], PAIR_BLOCK):
                block = v[start : start + PAIR_BLOCK]
                num = (block[:, None] - v[None, :]) ** 2
                den = self._pair[start : start + PAIR_BLOCK] + self.lam
                best = max(best, float(np.max(num / den)))
            return best
        if isinstance(fc, ProductGridClass):
            L2 = fc.L**2
            return float(L2 / (self._W[x, a] * L2 + self.lam))
        if isinstance(fc, LinearClass):
            return float(4.0 * self._gram.norm_sq(fc.phi[x, a]))
        raise TypeError(f"unsupported class {type(fc).__name__}")

    def dsq_table(self) -> np.ndarray:
        """
        D^2 at every (x, a), shape (nX, nA).
        """
        fc = self.fclass
        shape = (fc.num_states, fc.num_actions)
        if self.degenerate:
            return np.zeros(shape)
        if isinstance(fc, ProductGridClass):
            L2 = fc.L**2
            return L2 / (self._W * L2 + self.lam)
        if isinstance(fc, LinearClass):
            return 4.0 * self._gram.norm_sq(fc.phi)
        out = np.zeros(shape)
        for x in range(shape[0]):
            for a in range(shape[1]):
                out[x, a] = self.dsq(x, a)
        return out

    def width(self, x: int, a: int) -> float:
        """
        D = sqrt(D^2) at z = (x, a).
        """
        return float(np.sqrt(self.dsq(x, a)))

    def copy(self) -> UncertaintyContext:
        """
        Independent copy of the running state.
        """
        return copy.deepcopy(self)
