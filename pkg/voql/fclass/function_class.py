"""
function_class.py
=================

Module containing the FunctionClass base class and the two tabular classes:

    FiniteClass         explicit member tables (x, a) -> [0, L]
    ProductGridClass    every table whose entries lie on the value grid
                        {0, g, 2g, ..., L}; never materialized

Members are referred to by integer index. For ProductGridClass the index is
the mixed-radix number whose digits are the grid indices of the entries, in
row-major (x, a) order with the first entry most significant, so that
comparing indices agrees with comparing digit tuples lexicographically.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .fclass_exceptions import EmptyClassError

FUNCTION_CLASS_KINDS = ("finite", "product", "linear")


class FunctionClass:
    """
    Hypothesis set F^h of functions on the finite grid X x A.

    Subclasses implement the member lookup and size accounting; regression,
    uncertainty and bonus computations dispatch on `kind`.
    """

    kind: str
    num_states: int
    num_actions: int
    L: float
    h: int

    def set_shape(self, num_states: int, num_actions: int) -> None:
        """
        Set the size of the (x, a) grid.
        """
        if not isinstance(num_states, int) or not isinstance(num_actions, int):
            raise TypeError("num_states and num_actions must be integers")
        if num_states < 1 or num_actions < 1:
            raise ValueError("num_states and num_actions must be positive")
        self.num_states = num_states
        self.num_actions = num_actions

    def set_range(self, L: float) -> None:
        """
        Set the range bound L.
        """
        if isinstance(L, int):
            L = float(L)
        if not isinstance(L, float):
            raise TypeError("L must be a float")
        if L < 0:
            raise ValueError("L must be nonnegative")
        self.L = L

    def set_level(self, h: int) -> None:
        """
        Set the level this class belongs to.
        """
        if not isinstance(h, int):
            raise TypeError("h must be an integer")
        self.h = h

    @property
    def size(self) -> int:
        """Number of members."""
        raise NotImplementedError

    def log_size(self) -> float:
        """Natural log of the number of members."""
        raise NotImplementedError

    def table(self, idx: int) -> np.ndarray:
        """Member values on the (x, a) grid, shape (nX, nA)."""
        raise NotImplementedError

    def enlarged(self, factor: float) -> FunctionClass:
        """Class with range (and radius) multiplied by factor."""
        raise NotImplementedError

    def eluder_dim_bound(self, T: int, alpha: float, lam: float) -> float:
        """Estimate of the generalized Eluder dimension dim_{alpha,T}."""
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        """JSON-serializable description."""
        raise NotImplementedError

    def __str__(self) -> str:
        return (
            f"{type(self).__name__}(h={self.h}, L={self.L}, "
            + f"log_size={self.log_size():.3f})"
        )


class FiniteClass(FunctionClass):
    """
    Explicit finite class. Member tables are clipped into [0, L] unless
    clip=False (used for exact views of linear covers, whose members may be
    negative).
    """

    tables: np.ndarray
    clipped: bool

    def __init__(
        self,
        tables: np.ndarray,
        L: float = 1.0,
        h: int = 0,
        clip: bool = True,
    ) -> None:
        """
        Constructor for FiniteClass.

        Parameters
        ----------
        tables : np.ndarray
            Member values, shape (M, nX, nA)
        L : float, optional
            Range bound, by default 1.0
        h : int, optional
            Level, by default 0
        clip : bool, optional
            Clip members into [0, L], by default True
        """
        self.kind = "finite"
        self.set_range(L)
        self.set_level(h)
        self.set_tables(tables, clip)

    def set_tables(self, tables: np.ndarray, clip: bool) -> None:
        """
        Set the member tables.
        """
        tables = np.array(tables, dtype=float)
        if tables.ndim != 3:
            raise ValueError("tables must have shape (M, nX, nA)")
        if tables.shape[0] == 0:
            raise EmptyClassError("a finite class needs at least one member")
        if not np.all(np.isfinite(tables)):
            raise ValueError("member values must be finite")
        self.set_shape(int(tables.shape[1]), int(tables.shape[2]))
        if clip:
            tables = np.clip(tables, 0.0, self.L)
        self.clipped = clip
        self.tables = tables
        self.tables.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.tables.shape[0])

    def log_size(self) -> float:
        return float(np.log(self.size))

    def table(self, idx: int) -> np.ndarray:
        return self.tables[idx]

    def values_at(self, x: np.ndarray, a: np.ndarray) -> np.ndarray:
        """
        All member values at the points (x_s, a_s), shape (M, n).
        """
        return self.tables[:, x, a]

    def enlarged(self, factor: float) -> FiniteClass:
        return FiniteClass(
            self.tables * factor, self.L * factor, self.h, self.clipped
        )

    def eluder_dim_bound(self, T: int, alpha: float, lam: float) -> float:
        M = self.size
        return float(min(T, M * np.log1p(self.L**2 * T / (alpha**2 * lam))))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "h": self.h,
            "L": self.L,
            "clip": self.clipped,
            "tables": self.tables.tolist(),
        }


class ProductGridClass(FunctionClass):
    """
    All tables (x, a) -> {0, g, ..., L}. The class is a product over the
    (x, a) grid, so weighted losses, version-space spreads and uncertainty
    widths decompose per entry and are computed without enumerating members.
    """

    grid_step: float
    grid: np.ndarray

    def __init__(
        self,
        num_states: int,
        num_actions: int,
        L: float = 1.0,
        grid_step: float = 0.1,
        h: int = 0,
    ) -> None:
        """
        Constructor for ProductGridClass.

        Parameters
        ----------
        num_states, num_actions : int
            Size of the (x, a) grid
        L : float, optional
            Largest grid value, by default 1.0
        grid_step : float, optional
            Grid spacing g, by default 0.1; the last value is L itself
        h : int, optional
            Level, by default 0
        """
        self.kind = "product"
        self.set_shape(num_states, num_actions)
        self.set_range(L)
        self.set_level(h)
        self.set_grid(grid_step)

    def set_grid(self, grid_step: float) -> None:
        """
        Set the value grid {0, g, ..., L}.
        """
        if not grid_step > 0:
            raise ValueError("grid_step must be positive")
        self.grid_step = float(grid_step)
        G = int(np.ceil(self.L / self.grid_step - 1e-9)) + 1
        self.grid = np.minimum(np.arange(G) * self.grid_step, self.L)
        self.grid.setflags(write=False)

    @property
    def num_grid(self) -> int:
        """Number of grid values G."""
        return int(self.grid.shape[0])

    @property
    def num_entries(self) -> int:
        """Number of (x, a) entries."""
        return self.num_states * self.num_actions

    @property
    def size(self) -> int:
        return self.num_grid**self.num_entries

    def log_size(self) -> float:
        return float(self.num_entries * np.log(self.num_grid))

    def encode(self, digits: np.ndarray) -> int:
        """
        Member index of the table with grid indices `digits`, shape (nX, nA).
        """
        idx = 0
        for k in np.asarray(digits, dtype=int).ravel():
            idx = idx * self.num_grid + int(k)
        return idx

    def decode(self, idx: int) -> np.ndarray:
        """
        Grid indices of member `idx`, shape (nX, nA).
        """
        if not 0 <= idx < self.size:
            raise IndexError(f"member index {idx} out of range")
        n = self.num_entries
        digits = np.zeros(n, dtype=int)
        for i in range(n - 1, -1, -1):
            idx, digits[i] = divmod(idx, self.num_grid)
        return digits.reshape(self.num_states, self.num_actions)

    def table(self, idx: int) -> np.ndarray:
        return self.grid[self.decode(idx)]

    def enlarged(self, factor: float) -> ProductGridClass:
        return ProductGridClass(
            self.num_states,
            self.num_actions,
            self.L * factor,
            self.grid_step,
            self.h,
        )

    def eluder_dim_bound(self, T: int, alpha: float, lam: float) -> float:
        # one-hot linear form with d = nX * nA
        n = self.num_entries
        return float(n * np.log1p(self.L**2 * T / (alpha**2 * n * lam)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "h": self.h,
            "L": self.L,
            "num_states": self.num_states,
            "num_actions": self.num_actions,
            "grid_step": self.grid_step,
        }
