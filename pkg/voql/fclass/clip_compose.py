"""
clip_compose.py
===============

Module containing clip_compose, which builds the clipped value functions
f = min(max(f_hat + b + shift, lo), hi) from a regression fit and a bonus.
"""

import numpy as np


def clip_compose(
    f_hat: np.ndarray | float,
    b: np.ndarray | float,
    shift: float = 0.0,
    lo: float = -np.inf,
    hi: float = np.inf,
) -> np.ndarray:
    """
    Pointwise min(max(f_hat + b + shift, lo), hi).

    Parameters
    ----------
    f_hat : np.ndarray | float
        Regression center, table over (x, a) or a scalar
    b : np.ndarray | float
        Bonus (already multiplied and signed as needed), broadcastable to
        f_hat
    shift : float, optional
        Constant added before clipping, by default 0
    lo, hi : float, optional
        Clip bounds, lo <= hi

    Returns
    -------
    f : np.ndarray
        The clipped function
    """
    if lo > hi:
        raise ValueError(f"empty clip range [{lo}, {hi}]")
    total = np.asarray(f_hat, dtype=float) + np.asarray(b, dtype=float) + shift
    return np.minimum(np.maximum(total, lo), hi)
