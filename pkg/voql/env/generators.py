"""
generators.py
=============

Module containing seeded generators for random episodic MDPs.

All generators take an explicit seed and draw from their own
`numpy.random.Generator`; no global random state is touched.
Rewards are sparse: they are placed at the last level only, so every
trajectory collects a total reward in [0, 1].
"""

from typing import Optional

import numpy as np

from .env_exceptions import GeneratorError
from .episodic_mdp import EpisodicMdp

FEATURE_KINDS = ("simplex", "one_hot")


def gen_linear_mdp(
    d: int,
    H: int,
    nX: int,
    nA: int,
    seed: int,
    feature_kind: str = "simplex",
    reward_noise: str = "deterministic",
    name: Optional[str] = None,
) -> EpisodicMdp:
    """
    Generate a random linear MDP.

    Features are drawn on the probability simplex of R^d and each row of the
    feature-space kernel is a probability vector over states, so that
    P^h = phi^h feat_mu^h is a valid kernel by construction. Rewards are
    r^H = phi^H theta^H with theta^H uniform in [0, 1]^d and zero elsewhere.

    Parameters
    ----------
    d : int
        Feature dimension, 1 <= d <= nX * nA
    H : int
        Horizon
    nX, nA : int
        Number of states and actions (at least 2 each)
    seed : int
        Seed for the generator
    feature_kind : str, optional
        "simplex" (default) or "one_hot"; the latter requires d = nX * nA and
        embeds a random tabular MDP exactly
    reward_noise : str, optional
        Reward noise model passed to EpisodicMdp
    name : str, optional
        Instance label

    Returns
    -------
    mdp : EpisodicMdp
        The generated instance, with B^h = max(||sum_x mu^h(x)|| + ||theta^h||,
        1) recorded.
    """
    _check_sizes(H, nX, nA)
    if not isinstance(d, int) or d < 1:
        raise GeneratorError("feature dimension d must be a positive integer")
    if d > nX * nA:
        raise GeneratorError(
            f"d = {d} exceeds nX * nA = {nX * nA}; "
            + "features this rich carry no linear structure"
        )
    if feature_kind not in FEATURE_KINDS:
        raise GeneratorError(f"feature_kind must be one of {FEATURE_KINDS}")
    if name is None:
        name = f"linear_d{d}_H{H}_x{nX}_a{nA}_s{seed}"
    if feature_kind == "one_hot":
        if d != nX * nA:
            raise GeneratorError("one-hot features need d = nX * nA")
        tab = gen_tabular_mdp(H, nX, nA, seed, reward_noise=reward_noise)
        return embed_one_hot(tab, name=name)

    rng = np.random.default_rng(seed)
    if d == 1:
        phi = np.ones((H, nX, nA, 1))
    else:
        phi = rng.dirichlet(np.ones(d), size=(H, nX, nA))
    feat_mu = rng.dirichlet(np.ones(nX), size=(H, d))
    theta = np.zeros((H, d))
    theta[H - 1] = rng.uniform(0.0, 1.0, size=d)
    P = np.einsum("hxad,hdy->hxay", phi, feat_mu)
    R = np.einsum("hxad,hd->hxa", phi, theta)
    mu = np.full(nX, 1.0 / nX)
    return EpisodicMdp(
        P=P,
        R=R,
        mu=mu,
        reward_noise=reward_noise,
        phi=phi,
        feat_mu=feat_mu,
        theta=theta,
        name=name,
        seed=seed,
    )


def gen_tabular_mdp(
    H: int,
    nX: int,
    nA: int,
    seed: int,
    reward_noise: str = "deterministic",
    name: Optional[str] = None,
) -> EpisodicMdp:
    """
    Generate a random tabular MDP with Dirichlet transition rows and mean
    rewards uniform in [0, 1] at the last level only.
    """
    _check_sizes(H, nX, nA)
    rng = np.random.default_rng(seed)
    P = rng.dirichlet(np.ones(nX), size=(H, nX, nA))
    R = np.zeros((H, nX, nA))
    R[H - 1] = rng.uniform(0.0, 1.0, size=(nX, nA))
    mu = np.full(nX, 1.0 / nX)
    if name is None:
        name = f"tabular_H{H}_x{nX}_a{nA}_s{seed}"
    return EpisodicMdp(
        P=P, R=R, mu=mu, reward_noise=reward_noise, name=name, seed=seed
    )


def embed_one_hot(mdp: EpisodicMdp, name: Optional[str] = None) -> EpisodicMdp:
    """
    Return a linear copy of a tabular MDP with one-hot features
    phi^h(x, a) = e_{x * nA + a}, so that d = nX * nA and the factorization is
    exact.
    """
    H, nX, nA = mdp.H, mdp.num_states, mdp.num_actions
    d = nX * nA
    phi = np.zeros((H, nX, nA, d))
    idx = np.arange(d).reshape(nX, nA)
    for h in range(H):
        phi[h, np.arange(nX)[:, None], np.arange(nA)[None, :], idx] = 1.0
    feat_mu = mdp.P.reshape(H, d, nX).copy()
    theta = mdp.R.reshape(H, d).copy()
    return EpisodicMdp(
        P=mdp.P,
        R=mdp.R,
        mu=mdp.mu,
        reward_noise=mdp.reward_noise,
        phi=phi,
        feat_mu=feat_mu,
        theta=theta,
        name=name if name is not None else mdp.name + "_one_hot",
        seed=mdp.seed,
    )


def _check_sizes(H: int, nX: int, nA: int) -> None:
    for label, val, lo in (("H", H, 1), ("nX", nX, 2), ("nA", nA, 2)):
        if not isinstance(val, int):
            raise TypeError(f"{label} must be an integer")
        if val < lo:
            raise GeneratorError(f"{label} must be at least {lo}")
