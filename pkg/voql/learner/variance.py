"""
variance.py
===========

Module containing the variance estimator and the regression weight rule.

The estimate is

    sigma^2 = min(4, ghat(z) - fhat_{-2}(z)^2
                     + D_1(z) (sqrt(bbeta^2 + lam) + 2 L sqrt(beta_2^2 + lam))
                     + 2 (1 + L) eps),

floored at 0, where D_1 is the width of the value class with unit history
weights. The regression weight is

    sigma_bar = max(sigma, alpha, sqrt(2) iota sqrt(f_2(z) - f_{-2}(z)),
                    2 (sqrt(upsilon) + iota) sqrt(D_w(z)))

with D_w the width under the past weights sigma_bar; the weight being
defined does not enter D_w. In the first episode sigma = 2 and
sigma_bar = max(2, alpha).
"""

import numpy as np

from .voql_state import VoqlState

FIRST_EPISODE_SIGMA = 2.0


def sigma_sq_value(
    ghat: float,
    fhat_m2: float,
    d_unit: float,
    beta_bar: float,
    beta2: float,
    lam: float,
    L: float,
    eps: float,
) -> float:
    """
    Variance estimate sigma^2 from its inputs.
    """
    slack = d_unit * (
        np.sqrt(beta_bar**2 + lam) + 2 * L * np.sqrt(beta2**2 + lam)
    )
    s2 = ghat - fhat_m2**2 + slack + 2 * (1 + L) * eps
    return float(max(min(4.0, s2), 0.0))


def sigma_bar_value(
    sigma: float,
    alpha: float,
    iota: float,
    upsilon: float,
    f2: float,
    fm2: float,
    d_weighted: float,
) -> float:
    """
    Regression weight sigma_bar from its inputs. Used both online and when
    replaying a logged run, so both give identical floats.
    """
    gap = np.sqrt(max(f2 - fm2, 0.0))
    spread = np.sqrt(2.0) * iota * gap
    width = 2.0 * (np.sqrt(upsilon) + iota) * np.sqrt(d_weighted)
    return float(max(sigma, alpha, spread, width))


def sigma_estimate(state: VoqlState, z: tuple[int, int], h: int) -> float:
    """
    sigma_t^h at z for the current episode of the state.
    """
    if state.t <= 1:
        return FIRST_EPISODE_SIGMA
    x, a = z
    p = state.params
    s2 = sigma_sq_value(
        float(state.ghat[h, x, a]),
        float(state.fhat_m2[h, x, a]),
        state.unit_ctx[h].width(x, a),
        p.beta_bar(state.t),
        p.beta2(state.t),
        p.lam,
        p.L,
        p.eps,
    )
    return float(np.sqrt(s2))


def sigma_bar(
    state: VoqlState, z: tuple[int, int], h: int, sigma: float
) -> float:
    """
    sigma_bar_t^h at z given sigma from sigma_estimate.
    """
    p = state.params
    if state.t <= 1:
        return max(sigma, p.alpha)
    x, a = z
    return sigma_bar_value(
        sigma,
        p.alpha,
        p.iota(),
        p.upsilon(),
        float(state.f2[h, x, a]),
        float(state.fm2[h, x, a]),
        state.weighted_ctx[h].width(x, a),
    )
