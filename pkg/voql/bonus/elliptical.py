"""
elliptical.py
=============

Module containing the elliptical bonus for linear classes,

    b(z) = ||phi(z)||_{Sigma^{-1}} * sqrt(beta^2 + lam),
    Sigma = lam / (4 B^2) I + sum_s phi(z_s) phi(z_s)^T / sigma_s^2.
"""

import numpy as np

from ..eluder.gram_inverse import GramInverse
from ..fclass.level_dataset import LevelDataset
from .bonus_exceptions import BonusError
from .bonus_fn import BonusFn


def elliptical_bonus(
    phi: np.ndarray,
    data: LevelDataset,
    beta: float,
    lam: float,
    B: float,
    weights: np.ndarray | None = None,
    t: int = 0,
    h: int = 0,
) -> BonusFn:
    """
    Elliptical bonus built from scratch.

    Parameters
    ----------
    phi : np.ndarray
        Features, shape (nX, nA, d)
    data : LevelDataset
        Supplies the points z_s
    beta : float
        Confidence radius
    lam : float
        Regularizer, lam > 0
    B : float
        Ball radius of the class
    weights : np.ndarray, optional
        Weights sigma_s; defaults to the dataset weights sigma_bar_s
    t, h : int, optional
        Provenance
    """
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise BonusError("features must be finite")
    if weights is None:
        weights = data.sigma_bar
    if B == 0:
        return BonusFn(np.zeros(phi.shape[:2]), "elliptical", t, h, beta)
    gram = GramInverse(int(phi.shape[2]), lam / (4 * B**2))
    for x, a, s in zip(data.x, data.a, weights):
        gram.update(phi[x, a], 1.0 / s**2)
    return bonus_from_gram(phi, gram, beta, lam, t, h)


def bonus_from_gram(
    phi: np.ndarray,
    gram: GramInverse,
    beta: float,
    lam: float,
    t: int = 0,
    h: int = 0,
) -> BonusFn:
    """
    Elliptical bonus from a maintained Gram inverse.
    """
    if beta < 0 or not np.isfinite(beta):
        raise BonusError("beta must be finite and nonnegative")
    scale = float(np.sqrt(beta**2 + lam))
    table = np.sqrt(gram.norm_sq(phi)) * scale
    return BonusFn(
        table,
        "elliptical",
        t=t,
        h=h,
        beta=beta,
        n_data=gram.num_updates,
        descriptor={"Sigma_inv": gram.inv.copy(), "scale": scale},
    )
