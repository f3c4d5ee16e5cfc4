"""
eluder_dim.py
=============

Module containing the generalized Eluder dimension of a realized sequence,

    dim(F, Z, sigma) = sum_i min(1, D^2(z_i; z_[i-1], sigma_[i-1]) / sigma_i^2),

and the closed-form bound for linear classes.

The dimension dim_{alpha,T} takes a sup over all sequences and is not
computed; FunctionClass.eluder_dim_bound provides the estimate used by the
exploration schedule.
"""

from typing import Sequence

import numpy as np

from ..fclass.function_class import FunctionClass
from .uncertainty import UncertaintyContext


def gen_eluder_dim(
    fclass: FunctionClass,
    Z: Sequence[tuple[int, int]],
    sigmas: Sequence[float],
    lam: float = 1.0,
) -> float:
    """
    Generalized Eluder dimension of the sequence (Z, sigmas), evaluated
    online.

    Parameters
    ----------
    fclass : FunctionClass
        The class F
    Z : Sequence[tuple[int, int]]
        Points z_i = (x_i, a_i)
    sigmas : Sequence[float]
        Weights sigma_i > 0
    lam : float, optional
        Regularizer, by default 1.0
    """
    return float(np.sum(eluder_terms(fclass, Z, sigmas, lam)))


def eluder_terms(
    fclass: FunctionClass,
    Z: Sequence[tuple[int, int]],
    sigmas: Sequence[float],
    lam: float = 1.0,
) -> np.ndarray:
    """
    The summands min(1, D^2 / sigma_i^2) of gen_eluder_dim.
    """
    if len(Z) != len(sigmas):
        raise ValueError("Z and sigmas must have the same length")
    ctx = UncertaintyContext(fclass, lam)
    terms = np.zeros(len(Z))
    for i, ((x, a), sigma) in enumerate(zip(Z, sigmas)):
        terms[i] = min(1.0, ctx.dsq(x, a) / sigma**2)
        ctx.append(x, a, sigma)
    return terms


def linear_eluder_bound(
    d: int, B: float, T: int, alpha: float, lam: float, C: float = 4.0
) -> float:
    """
    C * d * log(1 + B^2 T / (alpha^2 d lam)).
    """
    return float(C * d * np.log1p(B**2 * T / (alpha**2 * d * lam)))
