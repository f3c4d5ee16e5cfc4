"""
episodic_mdp.py
===============

Module containing the EpisodicMdp class, which describes a finite episodic
time-inhomogeneous MDP together with (optional) linear features.

Levels are indexed h = 0, ..., H-1 internally. Arrays are stored densely:

    P[h, x, a, x']      transition kernel
    R[h, x, a]          mean reward
    mu[x]               initial distribution
    phi[h, x, a, :]     features (linear instances only)
    feat_mu[h, :, x']   feature-space kernel, P[h] = phi[h] @ feat_mu[h]
    theta[h, :]         reward weights, R[h] = phi[h] @ theta[h]

JSON schema (`to_dict` / `save_json`)
-------------------------------------
    {
        "format": "voql-episodic-mdp",
        "version": 1,
        "name": str,
        "seed": int | null,
        "H": int, "num_states": int, "num_actions": int,
        "reward_noise": "deterministic" | "bernoulli",
        "P": [[[[float]]]], "R": [[[float]]], "mu": [float],
        "features": null | {
            "phi": [[[[float]]]], "mu": [[[float]]],
            "theta": [[float]], "B": [float]
        }
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .env_exceptions import FeatureError, InvalidMdpError

ROW_TOL = 1e-12
FACTOR_TOL = 1e-10
REWARD_NOISE_MODELS = ("deterministic", "bernoulli")


class EpisodicMdp:
    """
    Episodic time-inhomogeneous MDP with exact access to its kernels.

    Instances are immutable after construction: the arrays are stored
    read-only, so they can be shared between concurrent runs.
    """

    name: str
    seed: Optional[int]
    H: int
    num_states: int
    num_actions: int
    reward_noise: str
    P: np.ndarray
    R: np.ndarray
    mu: np.ndarray
    phi: Optional[np.ndarray]
    feat_mu: Optional[np.ndarray]
    theta: Optional[np.ndarray]
    B: Optional[np.ndarray]

    def __init__(
        self,
        P: np.ndarray,
        R: np.ndarray,
        mu: np.ndarray,
        reward_noise: str = "deterministic",
        phi: Optional[np.ndarray] = None,
        feat_mu: Optional[np.ndarray] = None,
        theta: Optional[np.ndarray] = None,
        B: Optional[np.ndarray] = None,
        name: str = "mdp",
        seed: Optional[int] = None,
    ) -> None:
        """
        Constructor for EpisodicMdp class.

        Parameters
        ----------
        P : np.ndarray
            Transition kernels, shape (H, nX, nA, nX)
        R : np.ndarray
            Mean rewards in [0, 1], shape (H, nX, nA)
        mu : np.ndarray
            Initial distribution, shape (nX,)
        reward_noise : str, optional
            "deterministic" (default) or "bernoulli"
        phi, feat_mu, theta : np.ndarray, optional
            Linear structure; either all or none must be given
        B : np.ndarray, optional
            Per-level norm bound; computed from feat_mu and theta if omitted
        name : str, optional
            Label used in logs and file names
        seed : int, optional
            Generator seed, recorded for reproducibility
        """
        self.name = name
        self.seed = seed
        self.set_kernels(P, R, mu)
        self.set_reward_noise(reward_noise)
        self.set_features(phi, feat_mu, theta, B)
        self.check_trajectory_reward()
        for arr in (self.P, self.R, self.mu):
            arr.setflags(write=False)

    def __str__(self) -> str:
        """
        Return string representation.
        """
        s = f"EpisodicMdp '{self.name}':\n"
        s += f"\tH: {self.H}\n"
        s += f"\tnum_states: {self.num_states}\n"
        s += f"\tnum_actions: {self.num_actions}\n"
        s += f"\treward_noise: {self.reward_noise}\n"
        s += f"\tfeature_dim: {self.d if self.is_linear else None}\n"
        return s

    # SETTERS ################################################################

    def set_kernels(self, P: np.ndarray, R: np.ndarray, mu: np.ndarray) -> None:
        """
        Set and validate transition kernels, mean rewards and the initial
        distribution.
        """
        P = np.array(P, dtype=float)
        R = np.array(R, dtype=float)
        mu = np.array(mu, dtype=float)
        if P.ndim != 4 or P.shape[1] != P.shape[3]:
            raise InvalidMdpError("P must have shape (H, nX, nA, nX)")
        H, nX, nA, _ = P.shape
        if H < 1:
            raise InvalidMdpError("horizon H must be a positive integer")
        if R.shape != (H, nX, nA):
            raise InvalidMdpError(
                f"R must have shape {(H, nX, nA)}, got {R.shape}"
            )
        if mu.shape != (nX,):
            raise InvalidMdpError(f"mu must have shape {(nX,)}")
        if not (np.all(np.isfinite(P)) and np.all(np.isfinite(R))):
            raise InvalidMdpError("P and R must be finite")
        if np.any(P < 0):
            raise InvalidMdpError("transition probabilities must be >= 0")
        row_err = np.max(np.abs(P.sum(axis=3) - 1.0))
        if row_err > ROW_TOL:
            raise InvalidMdpError(
                f"transition rows must sum to 1 (max error {row_err:.3e})"
            )
        if np.any(R < 0) or np.any(R > 1):
            raise InvalidMdpError("mean rewards must lie in [0, 1]")
        if np.any(mu < 0) or abs(mu.sum() - 1.0) > ROW_TOL:
            raise InvalidMdpError("mu must be a probability vector")
        self.H = H
        self.num_states = nX
        self.num_actions = nA
        self.P = P
        self.R = R
        self.mu = mu

    def set_reward_noise(self, reward_noise: str) -> None:
        """
        Set the reward noise model.
        """
        if reward_noise not in REWARD_NOISE_MODELS:
            raise ValueError(
                f"reward_noise must be one of {REWARD_NOISE_MODELS}"
            )
        self.reward_noise = reward_noise
        if reward_noise == "bernoulli":
            if np.any(self.R * self.num_reward_levels > 1.0 + ROW_TOL):
                raise InvalidMdpError(
                    "bernoulli rewards need R <= 1/k with k rewarded levels"
                )

    def set_features(
        self,
        phi: Optional[np.ndarray],
        feat_mu: Optional[np.ndarray],
        theta: Optional[np.ndarray],
        B: Optional[np.ndarray],
    ) -> None:
        """
        Set and validate the linear structure P^h = phi^h feat_mu^h,
        R^h = phi^h theta^h.
        """
        given = [phi is not None, feat_mu is not None, theta is not None]
        if not any(given):
            self.phi = self.feat_mu = self.theta = self.B = None
            return
        if not all(given):
            raise FeatureError("phi, feat_mu and theta must be given together")
        phi = np.array(phi, dtype=float)
        feat_mu = np.array(feat_mu, dtype=float)
        theta = np.array(theta, dtype=float)
        H, nX, nA = self.H, self.num_states, self.num_actions
        if phi.ndim != 4 or phi.shape[:3] != (H, nX, nA):
            raise FeatureError("phi must have shape (H, nX, nA, d)")
        d = phi.shape[3]
        if feat_mu.shape != (H, d, nX):
            raise FeatureError(f"feat_mu must have shape {(H, d, nX)}")
        if theta.shape != (H, d):
            raise FeatureError(f"theta must have shape {(H, d)}")
        if not np.all(np.isfinite(phi)):
            raise FeatureError("features must be finite")
        if np.max(np.linalg.norm(phi, axis=3)) > 1.0 + ROW_TOL:
            raise FeatureError("features must satisfy ||phi||_2 <= 1")
        self.phi = phi
        self.feat_mu = feat_mu
        self.theta = theta
        residual = self.factorization_residual()
        if residual > FACTOR_TOL:
            raise FeatureError(
                f"linear factorization residual {residual:.3e} too large"
            )
        if B is None:
            B = np.array(
                [
                    max(
                        np.linalg.norm(feat_mu[h].sum(axis=1))
                        + np.linalg.norm(theta[h]),
                        1.0,
                    )
                    for h in range(H)
                ]
            )
        self.B = np.array(B, dtype=float).reshape(H)
        for arr in (self.phi, self.feat_mu, self.theta, self.B):
            arr.setflags(write=False)

    # STRUCTURE ##############################################################

    @property
    def is_linear(self) -> bool:
        """True if the instance carries a known feature mapping."""
        return self.phi is not None

    @property
    def d(self) -> int:
        """Feature dimension."""
        if self.phi is None:
            raise FeatureError("instance has no linear features")
        return int(self.phi.shape[3])

    @property
    def num_reward_levels(self) -> int:
        """Number of levels with a nonzero mean reward somewhere."""
        return int(np.sum(np.any(self.R > 0, axis=(1, 2))))

    @property
    def reward_scale(self) -> float:
        """Magnitude of a realized Bernoulli reward (1/k for k levels)."""
        return 1.0 / max(self.num_reward_levels, 1)

    def reward_variance(self) -> np.ndarray:
        """
        Variance of the realized reward given (h, x, a).
        """
        if self.reward_noise == "deterministic":
            return np.zeros_like(self.R)
        c = self.reward_scale
        return self.R * (c - self.R)

    def factorization_residual(self) -> float:
        """
        Max absolute residual of P^h = phi^h feat_mu^h and R^h = phi^h theta^h.
        """
        if self.phi is None or self.feat_mu is None or self.theta is None:
            raise FeatureError("instance has no linear features")
        P_lin = np.einsum("hxad,hdy->hxay", self.phi, self.feat_mu)
        R_lin = np.einsum("hxad,hd->hxa", self.phi, self.theta)
        return float(
            max(np.max(np.abs(P_lin - self.P)), np.max(np.abs(R_lin - self.R)))
        )

    def max_trajectory_reward(self) -> float:
        """
        Largest total reward any realizable trajectory can collect.
        """
        if self.reward_noise == "deterministic":
            r_max = self.R
        else:
            r_max = np.where(self.R > 0, self.reward_scale, 0.0)
        M = np.zeros((self.num_states,))
        for h in range(self.H - 1, -1, -1):
            reach = np.where(self.P[h] > 0, M[None, None, :], -np.inf)
            M = np.max(r_max[h] + reach.max(axis=2), axis=1)
        return float(np.max(M[self.mu > 0]))

    def check_trajectory_reward(self) -> None:
        """
        Enforce the sparse-reward regime: total reward per trajectory <= 1.
        """
        total = self.max_trajectory_reward()
        if total > 1.0 + ROW_TOL:
            raise InvalidMdpError(
                f"some trajectory collects total reward {total:.6f} > 1"
            )

    # SAMPLING ###############################################################

    def sample_initial(self, rng: np.random.Generator) -> int:
        """Draw x^1 from mu."""
        return int(rng.choice(self.num_states, p=self.mu))

    def step(
        self, h: int, x: int, a: int, rng: np.random.Generator
    ) -> tuple[float, int]:
        """
        Sample (r^h, x^{h+1}) given (x^h, a^h) = (x, a) at level h.
        """
        x_next = int(rng.choice(self.num_states, p=self.P[h, x, a]))
        if self.reward_noise == "deterministic":
            r = float(self.R[h, x, a])
        else:
            c = self.reward_scale
            r = c * float(rng.random() < self.R[h, x, a] / c)
        return r, x_next

    # SERIALIZATION ##########################################################

    def to_dict(self) -> dict[str, Any]:
        """
        Return a JSON-serializable description (see module docstring).
        """
        features: Optional[dict[str, Any]] = None
        if self.is_linear:
            assert self.phi is not None and self.feat_mu is not None
            assert self.theta is not None and self.B is not None
            features = {
                "phi": self.phi.tolist(),
                "mu": self.feat_mu.tolist(),
                "theta": self.theta.tolist(),
                "B": self.B.tolist(),
            }
        return {
            "format": "voql-episodic-mdp",
            "version": 1,
            "name": self.name,
            "seed": self.seed,
            "H": self.H,
            "num_states": self.num_states,
            "num_actions": self.num_actions,
            "reward_noise": self.reward_noise,
            "P": self.P.tolist(),
            "R": self.R.tolist(),
            "mu": self.mu.tolist(),
            "features": features,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EpisodicMdp:
        """
        Build an instance from the dictionary produced by `to_dict`.
        """
        if data.get("format") != "voql-episodic-mdp":
            raise InvalidMdpError("not a voql-episodic-mdp document")
        features = data.get("features")
        kwargs: dict[str, Any] = {}
        if features is not None:
            kwargs = {
                "phi": np.array(features["phi"]),
                "feat_mu": np.array(features["mu"]),
                "theta": np.array(features["theta"]),
                "B": np.array(features["B"]),
            }
        mdp = cls(
            P=np.array(data["P"]),
            R=np.array(data["R"]),
            mu=np.array(data["mu"]),
            reward_noise=data.get("reward_noise", "deterministic"),
            name=data.get("name", "mdp"),
            seed=data.get("seed"),
            **kwargs,
        )
        if (mdp.H, mdp.num_states, mdp.num_actions) != (
            data["H"],
            data["num_states"],
            data["num_actions"],
        ):
            raise InvalidMdpError("declared dimensions do not match arrays")
        return mdp

    def save_json(self, filename: str | Path) -> None:
        """
        Write the instance to a JSON file, creating the directory if needed.
        """
        path = Path(filename)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def load_json(cls, filename: str | Path) -> EpisodicMdp:
        """
        Read an instance written by `save_json`.
        """
        data = json.loads(Path(filename).read_text(encoding="utf-8"))
        return cls.from_dict(data)
