"""
level_dataset.py
================

Module containing the LevelDataset class, which stores the transitions
observed at one level together with their regression weights.
"""

import numpy as np


class LevelDataset:
    """
    Ordered tuples (x_s, a_s, r_s, x'_s) observed at one level, and the
    weights sigma_bar_s >= alpha attached to them.
    """

    alpha: float
    _x: list[int]
    _a: list[int]
    _r: list[float]
    _x_next: list[int]
    _sigma_bar: list[float]

    def __init__(self, alpha: float) -> None:
        """
        Constructor for LevelDataset class.

        Parameters
        ----------
        alpha : float
            Floor on the weights, alpha > 0
        """
        self.set_alpha(alpha)
        self._x = []
        self._a = []
        self._r = []
        self._x_next = []
        self._sigma_bar = []

    def __len__(self) -> int:
        return len(self._x)

    def set_alpha(self, alpha: float) -> None:
        """
        Set the weight floor.
        """
        if isinstance(alpha, int):
            alpha = float(alpha)
        if not isinstance(alpha, float):
            raise TypeError("alpha must be a float")
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        self.alpha = alpha

    def append(
        self, x: int, a: int, r: float, x_next: int, sigma_bar: float
    ) -> None:
        """
        Append one transition with its weight.
        """
        if not np.isfinite(r):
            raise ValueError("reward must be finite")
        if sigma_bar < self.alpha:
            raise ValueError(
                f"weight {sigma_bar} is below the floor alpha = {self.alpha}"
            )
        self._x.append(int(x))
        self._a.append(int(a))
        self._r.append(float(r))
        self._x_next.append(int(x_next))
        self._sigma_bar.append(float(sigma_bar))

    @property
    def x(self) -> np.ndarray:
        """States x_s."""
        return np.array(self._x, dtype=int)

    @property
    def a(self) -> np.ndarray:
        """Actions a_s."""
        return np.array(self._a, dtype=int)

    @property
    def r(self) -> np.ndarray:
        """Rewards r_s."""
        return np.array(self._r, dtype=float)

    @property
    def x_next(self) -> np.ndarray:
        """Next states x'_s."""
        return np.array(self._x_next, dtype=int)

    @property
    def sigma_bar(self) -> np.ndarray:
        """Weights sigma_bar_s."""
        return np.array(self._sigma_bar, dtype=float)

    def unit_weights(self) -> np.ndarray:
        """All-ones weights of matching length."""
        return np.ones(len(self))

    def targets(self, f_next: np.ndarray) -> np.ndarray:
        """
        Return r_s + max_a f_next(x'_s, a) for a next-level Q table f_next
        of shape (nX, nA).
        """
        if len(self) == 0:
            return np.zeros(0)
        return self.r + np.max(f_next, axis=1)[self.x_next]
