"""
gram_inverse.py
===============

Module containing the GramInverse class, a regularized weighted Gram matrix
Sigma = reg * I + sum_s w_s phi_s phi_s^T kept together with its inverse,
which is updated by the Sherman-Morrison formula after every rank-one term.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg


class GramInverse:
    """
    Weighted Gram matrix with an incrementally maintained inverse.
    """

    d: int
    reg: float
    Sigma: np.ndarray
    inv: np.ndarray
    num_updates: int

    def __init__(self, d: int, reg: float) -> None:
        """
        Constructor for GramInverse.

        Parameters
        ----------
        d : int
            Dimension
        reg : float
            Ridge regularizer, reg > 0
        """
        if not isinstance(d, int) or d < 1:
            raise ValueError("d must be a positive integer")
        if not reg > 0:
            raise ValueError("reg must be positive")
        self.d = d
        self.reg = float(reg)
        self.Sigma = self.reg * np.eye(d)
        self.inv = np.eye(d) / self.reg
        self.num_updates = 0

    def update(self, phi: np.ndarray, weight: float = 1.0) -> None:
        """
        Add weight * phi phi^T and update the inverse.
        """
        phi = np.asarray(phi, dtype=float)
        if not np.all(np.isfinite(phi)):
            raise ValueError("features must be finite")
        if not weight > 0:
            raise ValueError("weight must be positive")
        self.Sigma += weight * np.outer(phi, phi)
        u = self.inv @ phi
        self.inv -= weight * np.outer(u, u) / (1.0 + weight * (phi @ u))
        self.num_updates += 1

    def norm_sq(self, phi: np.ndarray) -> np.ndarray:
        """
        Squared inverse norm phi^T Sigma^{-1} phi, over the last axis.
        """
        phi = np.asarray(phi, dtype=float)
        q = np.einsum("...i,ij,...j->...", phi, self.inv, phi)
        return np.maximum(q, 0.0)

    def fresh_inverse(self) -> np.ndarray:
        """
        Inverse of Sigma computed from scratch.
        """
        return linalg.inv(self.Sigma)

    def drift(self) -> float:
        """
        Frobenius distance between the incremental and the fresh inverse.
        """
        return float(np.linalg.norm(self.inv - self.fresh_inverse(), "fro"))

    def copy(self) -> GramInverse:
        """
        Independent copy.
        """
        other = GramInverse(self.d, self.reg)
        other.Sigma = self.Sigma.copy()
        other.inv = self.inv.copy()
        other.num_updates = self.num_updates
        return other
