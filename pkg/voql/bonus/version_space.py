"""
version_space.py
================

Module containing the exact version-space bonus

    b(z) = max { |f(z) - f_hat(z)| : f in F,
                 sum_s (f(z_s) - f_hat(z_s))^2 / sigma_s^2 <= beta^2 }

and the spread helpers it shares with the subsampling bonus. Finite classes
and materialized linear covers are enumerated; product-grid classes are
solved per entry, since the constraint only binds where the member differs
from the center.
"""

import numpy as np

from ..fclass.function_class import (
    FiniteClass,
    FunctionClass,
    ProductGridClass,
)
from ..fclass.level_dataset import LevelDataset
from ..fclass.linear_cover import LinearClass
from .bonus_exceptions import BonusError
from .bonus_fn import BonusFn

# members per chunk when enumerating
CHUNK = 4096


def vs_bonus(
    fclass: FunctionClass,
    f_hat: int,
    data: LevelDataset,
    beta: float,
    weights: np.ndarray | None = None,
    t: int = 0,
    h: int = 0,
) -> BonusFn:
    """
    Exact version-space bonus around the member f_hat.

    Parameters
    ----------
    fclass : FunctionClass
        Finite, product-grid or materialized linear class
    f_hat : int
        Member index of the center
    data : LevelDataset
        Supplies the points z_s
    beta : float
        Radius of the version space
    weights : np.ndarray, optional
        Weights sigma_s; defaults to the dataset weights sigma_bar_s
    t, h : int, optional
        Provenance
    """
    if beta < 0 or not np.isfinite(beta):
        raise BonusError("beta must be finite and nonnegative")
    if weights is None:
        weights = data.sigma_bar
    w = np.asarray(weights, dtype=float)
    if w.shape[0] != len(data):
        raise BonusError("weights and data differ in length")
    prec = 1.0 / w**2
    table = class_spread(fclass, f_hat, data.x, data.a, prec, beta)
    return BonusFn(
        table,
        "vs",
        t=t,
        h=h,
        beta=beta,
        n_data=len(data),
        descriptor={"center": int(f_hat), "radius": float(beta)},
    )


def class_spread(
    fclass: FunctionClass,
    f_hat: int,
    x: np.ndarray,
    a: np.ndarray,
    prec: np.ndarray,
    radius: float,
) -> np.ndarray:
    """
    max |f - f_hat| over members with sum_s prec_s (f - f_hat)(z_s)^2 <=
    radius^2, as a table over (x, a).
    """
    if isinstance(fclass, ProductGridClass):
        W = np.zeros((fclass.num_states, fclass.num_actions))
        np.add.at(W, (x, a), prec)
        return product_spread(fclass, fclass.table(f_hat), W, radius)
    if isinstance(fclass, FiniteClass):
        return finite_spread(fclass.tables, f_hat, x, a, prec, radius)
    if isinstance(fclass, LinearClass):
        if fclass.tables is None or fclass.member_index is None:
            raise BonusError(
                "version-space bonus needs a materialized linear cover"
            )
        k = int(np.searchsorted(fclass.member_index, f_hat))
        if k >= fclass.member_index.shape[0] or (
            fclass.member_index[k] != f_hat
        ):
            raise BonusError(f"member {f_hat} is not in the cover")
        return finite_spread(fclass.tables, k, x, a, prec, radius)
    raise BonusError(f"unsupported class {type(fclass).__name__}")


def finite_spread(
    tables: np.ndarray,
    center: int,
    x: np.ndarray,
    a: np.ndarray,
    prec: np.ndarray,
    radius: float,
) -> np.ndarray:
    """
    Spread over an explicit member stack of shape (M, nX, nA), with the
    center given by its row.
    """
    fc = tables[center]
    out = np.zeros(fc.shape)
    r2 = radius**2
    for start in range(0, tables.shape[0], CHUNK):
        block = tables[start : start + CHUNK]
        diff = block[:, x, a] - fc[x, a][None, :]
        dist = np.sum(diff**2 * prec[None, :], axis=1)
        inside = block[dist <= r2]
        if inside.shape[0] > 0:
            out = np.maximum(out, np.max(np.abs(inside - fc), axis=0))
    return out


def product_spread(
    fclass: ProductGridClass,
    center_table: np.ndarray,
    W: np.ndarray,
    radius: float,
) -> np.ndarray:
    """
    Per-entry spread of a product-grid class: the largest |v - center| over
    grid values v with W (v - center)^2 <= radius^2.
    """
    dev = np.abs(fclass.grid[None, None, :] - center_table[:, :, None])
    ok = W[:, :, None] * dev**2 <= radius**2
    return np.max(np.where(ok, dev, 0.0), axis=2)
