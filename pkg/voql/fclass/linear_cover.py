"""
linear_cover.py
===============

Module containing the LinearClass, the class of linear functions
f_w(x, a) = <phi(x, a), w> with ||w||_2 <= B, discretized by an axis-grid
cover.

Cover construction
------------------
With s = eps_c / max_{x,a} ||phi(x, a)||_1 and K = floor(B / s), the cover is
the set of grid points s * j, j in {-K, ..., K}^d, lying in the B-ball.
Truncating every coordinate of a ball point toward zero lands on a grid point
that is still in the ball, at sup-norm distance < eps_c over the (x, a) grid.
The member index of s * j is the row-major flat index of j + K in the
(2K + 1)^d grid.

Members are exactly linear (not clipped), so their range bound is
L = B * max ||phi||_2.
"""

from __future__ import annotations

from typing import Any, Optional

import numpy as np
from scipy.special import gammaln

from .fclass_exceptions import CoverSizeError, EmptyClassError
from .function_class import FiniteClass, FunctionClass

ENUMERATION_THRESHOLD = 100_000
MEMBER_CAP = 10**12
GRID_ENUM_LIMIT = 1_000_000
BALL_TOL = 1e-12


class LinearClass(FunctionClass):
    """
    Linear class over known features with an axis-grid eps_c-cover.

    The cover is materialized (weights and member tables) only when it has at
    most `enumeration_threshold` members; regression then enumerates it.
    Larger covers are handled through `snap`.
    """

    phi: np.ndarray
    d: int
    B: float
    eps_c: float
    spacing: float
    K: int
    cover_size: int
    size_is_exact: bool
    enumeration_threshold: int
    member_cap: int
    weights_cover: Optional[np.ndarray]
    member_index: Optional[np.ndarray]
    tables: Optional[np.ndarray]

    def __init__(
        self,
        phi: np.ndarray,
        B: float,
        eps_c: float,
        h: int = 0,
        enumeration_threshold: int = ENUMERATION_THRESHOLD,
        member_cap: int = MEMBER_CAP,
    ) -> None:
        """
        Constructor for LinearClass.

        Parameters
        ----------
        phi : np.ndarray
            Features at level h, shape (nX, nA, d)
        B : float
            Ball radius, B >= 0
        eps_c : float
            Cover radius in sup-norm over the (x, a) grid, eps_c > 0
        h : int, optional
            Level, by default 0
        enumeration_threshold : int, optional
            Largest cover that is materialized, by default 1e5
        member_cap : int, optional
            Largest admissible cover; larger covers raise CoverSizeError
        """
        self.kind = "linear"
        self.set_level(h)
        self.set_features(phi)
        self.enumeration_threshold = int(enumeration_threshold)
        self.member_cap = int(member_cap)
        self.set_cover(B, eps_c)

    def set_features(self, phi: np.ndarray) -> None:
        """
        Set the feature table.
        """
        phi = np.array(phi, dtype=float)
        if phi.ndim != 3:
            raise ValueError("phi must have shape (nX, nA, d)")
        if not np.all(np.isfinite(phi)):
            raise ValueError("features must be finite")
        self.set_shape(int(phi.shape[0]), int(phi.shape[1]))
        self.phi = phi
        self.phi.setflags(write=False)
        self.d = int(phi.shape[2])
        if self.d < 1:
            raise EmptyClassError("feature dimension must be positive")

    def set_cover(self, B: float, eps_c: float) -> None:
        """
        Build the axis-grid cover of the B-ball.
        """
        if B < 0:
            raise ValueError("B must be nonnegative")
        if not eps_c > 0:
            raise ValueError("eps_c must be positive")
        self.B = float(B)
        self.eps_c = float(eps_c)
        max_l2 = float(np.max(np.linalg.norm(self.phi, axis=2)))
        self.set_range(self.B * max_l2)
        max_l1 = float(np.max(np.sum(np.abs(self.phi), axis=2)))
        if self.B == 0 or max_l1 == 0:
            self.spacing = self.eps_c
            self.K = 0
        else:
            self.spacing = self.eps_c / max_l1
            self.K = int(np.floor(self.B / self.spacing + 1e-9))
        self.weights_cover = None
        self.member_index = None
        self.tables = None
        if self.grid_size <= GRID_ENUM_LIMIT:
            self._enumerate_cover()
        else:
            self.cover_size = self._estimate_cover_size()
            self.size_is_exact = False
        if self.cover_size > self.member_cap:
            raise CoverSizeError(
                f"cover of level {self.h} has about {self.cover_size:.3e} "
                + f"members, above the cap {self.member_cap:.3e}"
            )

    def _enumerate_cover(self) -> None:
        side = 2 * self.K + 1
        flat = np.arange(side**self.d)
        digits = np.array(np.unravel_index(flat, (side,) * self.d)).T
        W = (digits - self.K) * self.spacing
        inside = np.sum(W**2, axis=1) <= self.B**2 * (1 + BALL_TOL)
        self.cover_size = int(np.sum(inside))
        self.size_is_exact = True
        if self.cover_size <= self.enumeration_threshold:
            self.weights_cover = W[inside]
            self.member_index = flat[inside]
            self.tables = np.einsum(
                "xad,md->mxa", self.phi, self.weights_cover
            )

    def _estimate_cover_size(self) -> int:
        # lattice points in the ball ~ ball volume / cell volume
        log_vol = (
            0.5 * self.d * np.log(np.pi)
            - gammaln(0.5 * self.d + 1)
            + self.d * np.log(self.B / self.spacing)
        )
        log_grid = self.d * np.log(2 * self.K + 1)
        return int(np.exp(min(log_vol, log_grid, 700.0)))

    # COVER ##################################################################

    @property
    def grid_size(self) -> int:
        """Number of points (2K + 1)^d of the full axis grid."""
        return (2 * self.K + 1) ** self.d

    @property
    def is_materialized(self) -> bool:
        """True if cover weights and member tables are stored."""
        return self.tables is not None

    @property
    def size(self) -> int:
        return self.cover_size

    def log_size(self) -> float:
        return float(np.log(max(self.cover_size, 1)))

    def project(self, w: np.ndarray) -> np.ndarray:
        """
        Radial projection onto the B-ball.
        """
        w = np.asarray(w, dtype=float)
        norm = float(np.linalg.norm(w))
        if norm > self.B:
            return w * (self.B / norm)
        return w

    def snap(self, w: np.ndarray) -> int:
        """
        Member index of the cover point obtained by truncating each
        coordinate of a ball point toward zero.
        """
        j = np.trunc(np.asarray(w, dtype=float) / self.spacing).astype(int)
        j = np.clip(j, -self.K, self.K)
        return self.encode(j)

    def encode(self, j: np.ndarray) -> int:
        """
        Member index of the grid point s * j.
        """
        side = 2 * self.K + 1
        idx = 0
        for ji in np.asarray(j, dtype=int):
            idx = idx * side + int(ji) + self.K
        return idx

    def weights(self, idx: int) -> np.ndarray:
        """
        Weight vector w of member `idx`.
        """
        side = 2 * self.K + 1
        if not 0 <= idx < self.grid_size:
            raise IndexError(f"member index {idx} out of range")
        j = np.zeros(self.d, dtype=int)
        for i in range(self.d - 1, -1, -1):
            idx, j[i] = divmod(idx, side)
        return (j - self.K) * self.spacing

    def table(self, idx: int) -> np.ndarray:
        return self.phi @ self.weights(idx)

    def as_finite(self, clip: bool = False) -> FiniteClass:
        """
        The materialized cover as an explicit finite class, with members in
        increasing index order.
        """
        if self.tables is None:
            raise CoverSizeError(
                f"cover with {self.cover_size} members is not materialized"
            )
        return FiniteClass(self.tables, L=self.L, h=self.h, clip=clip)

    def enlarged(self, factor: float) -> LinearClass:
        return LinearClass(
            self.phi,
            self.B * factor,
            self.eps_c,
            self.h,
            self.enumeration_threshold,
            self.member_cap,
        )

    def eluder_dim_bound(self, T: int, alpha: float, lam: float) -> float:
        return float(
            self.d * np.log1p(self.B**2 * T / (alpha**2 * self.d * lam))
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "h": self.h,
            "L": self.L,
            "B": self.B,
            "eps_c": self.eps_c,
            "spacing": self.spacing,
            "K": self.K,
            "cover_size": self.cover_size,
            "size_is_exact": self.size_is_exact,
        }


def build_linear_cover(
    phi: np.ndarray,
    B: float,
    eps_c: float,
    h: int = 0,
    enumeration_threshold: int = ENUMERATION_THRESHOLD,
    member_cap: int = MEMBER_CAP,
) -> LinearClass:
    """
    Build the linear class over features phi with an eps_c-cover of the
    B-ball (see module docstring).
    """
    return LinearClass(
        phi,
        B,
        eps_c,
        h=h,
        enumeration_threshold=enumeration_threshold,
        member_cap=member_cap,
    )
