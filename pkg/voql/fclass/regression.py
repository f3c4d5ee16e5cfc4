"""
regression.py
=============

Module containing the least-squares regression oracle

    argmin_{f in F} sum_s (f(x_s, a_s) - y_s)^2 / w_s^2

over the three kinds of function class. Ties are broken by the lowest
member index. Unweighted regression is the case w = 1.
"""

import numpy as np
from scipy import linalg

from .fclass_exceptions import EmptyClassError, SizeMismatchError
from .function_class import FiniteClass, FunctionClass, ProductGridClass
from .level_dataset import LevelDataset
from .linear_cover import LinearClass

# members per chunk when enumerating large finite classes
CHUNK = 4096


def weighted_regression(
    fclass: FunctionClass,
    data: LevelDataset,
    targets: np.ndarray,
    weights: np.ndarray,
    lam: float = 1.0,
) -> int:
    """
    Weighted least-squares fit over a function class.

    Parameters
    ----------
    fclass : FunctionClass
        The class to search
    data : LevelDataset
        Supplies the points (x_s, a_s)
    targets : np.ndarray
        Regression targets y_s
    weights : np.ndarray
        Weights sigma_bar_s (use ones for unweighted regression)
    lam : float, optional
        Bonus regularizer; linear classes solve a ridge problem with
        regularizer lam / (4 B^2), by default 1.0

    Returns
    -------
    idx : int
        Member index of the fit
    """
    y, w = _check_inputs(data, targets, weights)
    x, a = data.x, data.a
    if isinstance(fclass, FiniteClass):
        return _fit_tables(fclass.tables, x, a, y, w)
    if isinstance(fclass, ProductGridClass):
        return _fit_product(fclass, x, a, y, w)
    if isinstance(fclass, LinearClass):
        return _fit_linear(fclass, x, a, y, w, lam)
    raise TypeError(f"unsupported function class {type(fclass).__name__}")


def weighted_loss(
    fclass: FunctionClass,
    idx: int,
    data: LevelDataset,
    targets: np.ndarray,
    weights: np.ndarray,
) -> float:
    """
    Weighted loss sum_s (f(x_s, a_s) - y_s)^2 / w_s^2 of member `idx`.
    """
    y, w = _check_inputs(data, targets, weights)
    pred = fclass.table(idx)[data.x, data.a]
    return float(np.sum((pred - y) ** 2 / w**2))


def _check_inputs(
    data: LevelDataset, targets: np.ndarray, weights: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(targets, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if not len(data) == y.shape[0] == w.shape[0]:
        raise SizeMismatchError(
            f"{len(data)} points, {y.shape[0]} targets, {w.shape[0]} weights"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("regression targets must be finite")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ValueError("regression weights must be positive and finite")
    return y, w


def _fit_tables(
    tables: np.ndarray,
    x: np.ndarray,
    a: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
) -> int:
    M = tables.shape[0]
    if M == 0:
        raise EmptyClassError("cannot fit over an empty class")
    inv_w2 = 1.0 / w**2
    best_idx, best_loss = 0, np.inf
    for start in range(0, M, CHUNK):
        pred = tables[start : start + CHUNK][:, x, a]
        losses = np.sum((pred - y[None, :]) ** 2 * inv_w2[None, :], axis=1)
        k = int(np.argmin(losses))
        if losses[k] < best_loss:
            best_idx, best_loss = start + k, float(losses[k])
    return best_idx


def _fit_product(
    fclass: ProductGridClass,
    x: np.ndarray,
    a: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
) -> int:
    # per-entry loss W v^2 - 2 S v (+ const) over the grid values v
    shape = (fclass.num_states, fclass.num_actions)
    inv_w2 = 1.0 / w**2
    W = np.zeros(shape)
    S = np.zeros(shape)
    np.add.at(W, (x, a), inv_w2)
    np.add.at(S, (x, a), y * inv_w2)
    v = fclass.grid
    losses = W[:, :, None] * v**2 - 2 * S[:, :, None] * v
    digits = np.argmin(losses, axis=2)
    return fclass.encode(digits)


def _fit_linear(
    fclass: LinearClass,
    x: np.ndarray,
    a: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    lam: float,
) -> int:
    if fclass.K == 0:
        return fclass.encode(np.zeros(fclass.d, dtype=int))
    if fclass.tables is not None and fclass.member_index is not None:
        k = _fit_tables(fclass.tables, x, a, y, w)
        return int(fclass.member_index[k])
    w_hat = ridge_solution(fclass, x, a, y, w, lam)
    return fclass.snap(fclass.project(w_hat))


def ridge_solution(
    fclass: LinearClass,
    x: np.ndarray,
    a: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    lam: float,
) -> np.ndarray:
    """
    Weighted ridge solution on the continuous ball, before projection:
    (lam / (4 B^2) I + sum phi phi^T / w^2)^{-1} sum phi y / w^2.
    """
    Phi = fclass.phi[x, a]
    inv_w2 = 1.0 / w**2
    gram = lam / (4 * fclass.B**2) * np.eye(fclass.d)
    gram += Phi.T @ (Phi * inv_w2[:, None])
    rhs = Phi.T @ (y * inv_w2)
    return linalg.solve(gram, rhs, assume_a="pos")
