"""
params.py
=========

Module containing VoqlParams, the confidence radii and schedules of a run.

With delta' = delta / ((T + 1)(H + 1)) shared by every (t, h), N the largest
class size and N_b the bonus-class covering number, the radii are

    upsilon = sqrt(2 log N + ll(4, 8) - log delta')
    iota    = 3 sqrt(log N + log N_b + ll(4, 8) - log delta')
    beta_1  = sqrt(6 sqrt(lam) + 156) sqrt(2 log N + ll(4, 8) - log delta')
              + sqrt(8 t L eps / alpha^2)
    beta_2  = sqrt(2 (24 L + 21) iota_dot^2 + 20 t L eps)
    bbeta   = sqrt(8 (11 L + 9) iota_prime^2 + 32 t L eps)

where ll(a, b) = log(2 log(a L T / alpha) + 2) + log(log(b L / alpha^2) + 2),
iota_dot and iota_prime use the constants 18 and 32 in place of the alpha
terms. Every radius is multiplied by c_scale; c_scale = 1 reproduces the
theoretical constants. The switching threshold u_t is scaled too when C_u is
given; the default C_u pins u_1 = 2, the value range of f_2, for every
c_scale.
"""

from typing import Optional, Union

import numpy as np

from ..bonus.bonus_oracle import BonusOracle, ConsistentOracle
from ..env.episodic_mdp import EpisodicMdp
from ..fclass.class_family import ClassFamily
from .learner_exceptions import ScheduleError

SECOND_MOMENT_TARGETS = ("optimistic", "over_optimistic")
DEFAULT_C_SCALE = 0.05
FIXED_POINT_ITERS = 5

AnyOracle = Union[BonusOracle, ConsistentOracle]


class VoqlParams:
    """
    Run constants and the per-episode radius schedule.

    Attributes
    ----------
    T, H : int
        Number of episodes and horizon
    delta : float
        Failure probability
    alpha : float
        Weight floor, sqrt(1 / (T H)) by default
    lam : float
        Regularizer
    eps : float
        Misspecification of the class family
    eps_b : float
        Additive slack of the bonus oracle
    L : float
        Range bound of the value classes, at least 1
    c_scale : float
        Global multiplier of the radii and of u_t
    log_N, log_Nb : float
        Log sizes of the value class and of the bonus class
    dim : float
        Eluder dimension estimate used by u_t
    second_moment_target : str
        "optimistic" fits the second moment of r + f_1, "over_optimistic" of
        r + f_2
    """

    T: int
    H: int
    delta: float
    alpha: float
    lam: float
    eps: float
    eps_b: float
    L: float
    c_scale: float
    log_N: float
    log_Nb: float
    dim: float
    second_moment_target: str
    _C_u: Optional[float]

    def __init__(
        self,
        T: int,
        H: int,
        delta: float = 0.1,
        alpha: Optional[float] = None,
        lam: float = 1.0,
        eps: float = 0.0,
        eps_b: float = 0.0,
        L: float = 1.0,
        c_scale: float = DEFAULT_C_SCALE,
        C_u: Optional[float] = None,
        log_N: float = 0.0,
        log_Nb: float = 0.0,
        dim: float = 1.0,
        second_moment_target: str = "optimistic",
    ) -> None:
        self.set_horizon(T, H)
        if alpha is None:
            alpha = float(np.sqrt(1.0 / (T * H)))
        self.set_constants(delta, alpha, lam, L)
        self.set_slack(eps, eps_b)
        self.set_scale(c_scale, C_u)
        self.set_sizes(log_N, log_Nb, dim)
        self.set_second_moment_target(second_moment_target)

    def __str__(self) -> str:
        s = "VoqlParams:\n"
        s += f"\tT = {self.T}, H = {self.H}\n"
        s += f"\tdelta = {self.delta}, alpha = {self.alpha:.4g}\n"
        s += f"\tlam = {self.lam}, L = {self.L}\n"
        s += f"\teps = {self.eps}, eps_b = {self.eps_b}\n"
        s += f"\tc_scale = {self.c_scale}, C_u = {self.C_u:.4g}\n"
        s += f"\tlog N = {self.log_N:.4g}, log N_b = {self.log_Nb:.4g}\n"
        return s

    # SETTERS ################################################################

    def set_horizon(self, T: int, H: int) -> None:
        """
        Set the number of episodes and the horizon.
        """
        if not isinstance(T, (int, np.integer)):
            raise TypeError("T must be an integer")
        if not isinstance(H, (int, np.integer)):
            raise TypeError("H must be an integer")
        if T < 1 or H < 1:
            raise ValueError("T and H must be positive")
        self.T = int(T)
        self.H = int(H)

    def set_constants(
        self, delta: float, alpha: float, lam: float, L: float
    ) -> None:
        """
        Set delta, alpha, lam and the range bound L.
        """
        if not 0 < delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not 0 < alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if not lam > 0:
            raise ValueError("lam must be positive")
        if not L >= 1:
            raise ValueError("the range bound L must be at least 1")
        self.delta = float(delta)
        self.alpha = float(alpha)
        self.lam = float(lam)
        self.L = float(L)

    def set_slack(self, eps: float, eps_b: float) -> None:
        """
        Set the misspecification and bonus slack.
        """
        if eps < 0 or eps_b < 0:
            raise ValueError("eps and eps_b must be nonnegative")
        self.eps = float(eps)
        self.eps_b = float(eps_b)

    def set_scale(self, c_scale: float, C_u: Optional[float] = None) -> None:
        """
        Set the radius multiplier and the u_t constant. With C_u = None the
        constant is chosen so that u_1 = 2 whatever c_scale is.
        """
        if c_scale < 0 or not np.isfinite(c_scale):
            raise ValueError("c_scale must be finite and nonnegative")
        if C_u is not None and C_u < 0:
            raise ValueError("C_u must be nonnegative")
        self.c_scale = float(c_scale)
        self._C_u = None if C_u is None else float(C_u)

    def set_sizes(self, log_N: float, log_Nb: float, dim: float) -> None:
        """
        Set the class sizes and the Eluder dimension estimate.
        """
        if log_N < 0 or log_Nb < 0:
            raise ValueError("log sizes must be nonnegative")
        if not dim > 0:
            raise ValueError("the Eluder dimension estimate must be positive")
        self.log_N = float(log_N)
        self.log_Nb = float(log_Nb)
        self.dim = float(dim)

    def set_second_moment_target(self, target: str) -> None:
        """
        Set the function whose second moment the variance fit targets.
        """
        if target not in SECOND_MOMENT_TARGETS:
            raise ValueError(
                f"second_moment_target must be one of {SECOND_MOMENT_TARGETS}"
            )
        self.second_moment_target = target

    # RADII ##################################################################

    @property
    def delta_th(self) -> float:
        """Per-(t, h) failure probability delta / ((T + 1)(H + 1))."""
        return self.delta / ((self.T + 1) * (self.H + 1))

    @property
    def log_delta_th(self) -> float:
        """log of delta_th."""
        return float(
            np.log(self.delta) - np.log(self.T + 1) - np.log(self.H + 1)
        )

    def _loglog(self, a: float, b: float, alpha_terms: bool) -> float:
        L, T = self.L, self.T
        if alpha_terms:
            first = np.log(a * L * T / self.alpha)
            second = np.log(b * L / self.alpha**2)
        else:
            first = np.log(a * L * T)
            second = np.log(b * L)
        return float(np.log(2 * first + 2) + np.log(second + 2))

    def upsilon(self) -> float:
        """Scaled upsilon(delta_th)."""
        inner = 2 * self.log_N + self._loglog(4, 8, True) - self.log_delta_th
        return self.c_scale * float(np.sqrt(inner))

    def iota(self) -> float:
        """Scaled iota(delta_th)."""
        inner = (
            self.log_N
            + self.log_Nb
            + self._loglog(4, 8, True)
            - self.log_delta_th
        )
        return self.c_scale * 3.0 * float(np.sqrt(inner))

    def _iota_dot_sq(self) -> float:
        inner = (
            self.log_N
            + self.log_Nb
            + self._loglog(18, 18, False)
            - self.log_delta_th
        )
        return 2.0 * inner

    def _iota_prime_sq(self) -> float:
        inner = (
            self.log_N
            + self.log_Nb
            + self._loglog(32, 32, False)
            - self.log_delta_th
        )
        return 2.0 * inner

    def beta1(self, t: int) -> float:
        """Scaled optimistic radius beta_{t,1}."""
        inner = 2 * self.log_N + self._loglog(4, 8, True) - self.log_delta_th
        core = np.sqrt(6 * np.sqrt(self.lam) + 156) * np.sqrt(inner)
        drift = np.sqrt(8 * t * self.L * self.eps / self.alpha**2)
        return self.c_scale * float(core + drift)

    def beta2(self, t: int) -> float:
        """Scaled over-optimistic / pessimistic radius beta_{t,2}."""
        inner = (
            2 * (24 * self.L + 21) * self._iota_dot_sq()
            + 20 * t * self.L * self.eps
        )
        return self.c_scale * float(np.sqrt(inner))

    def beta_bar(self, t: int) -> float:
        """Scaled second-moment radius."""
        inner = (
            8 * (11 * self.L + 9) * self._iota_prime_sq()
            + 32 * t * self.L * self.eps
        )
        return self.c_scale * float(np.sqrt(inner))

    def beta_max(self) -> float:
        """Largest radius used in the run."""
        T = self.T
        return max(self.beta1(T), self.beta2(T), self.beta_bar(T))

    # SWITCHING THRESHOLD ####################################################

    def _u_inner(self, t: int) -> float:
        T, H = self.T, self.H
        log_core = (
            np.log(T) + np.log(H) - np.log(self.alpha) - np.log(self.delta)
        )
        explore = np.sqrt(self.log_N + log_core + T * self.eps / self.alpha**2)
        lead = (self.log_N + self.log_Nb + log_core) * H**2.5
        lead *= np.sqrt(self.dim)
        per_t = (lead + np.sqrt(t) * H * self.eps_b) / np.sqrt(t)
        return float(explore * per_t + H**2 * self.eps + H * self.delta)

    @property
    def C_u(self) -> float:
        """Constant of u_t; by default the value that makes u_1 = 2."""
        if self._C_u is not None:
            return self._C_u
        return 2.0 / self._u_inner(1)

    def u(self, t: int) -> float:
        """Switching threshold u_t."""
        scale = 1.0 if self._C_u is None else self.c_scale
        return scale * self.C_u * self._u_inner(t)

    # SCHEDULE ###############################################################

    def schedule(self, t: int) -> dict[str, float]:
        """
        All radii and the threshold for episode t.
        """
        return {
            "beta1": self.beta1(t),
            "beta2": self.beta2(t),
            "beta_bar": self.beta_bar(t),
            "upsilon": self.upsilon(),
            "iota": self.iota(),
            "u": self.u(t),
        }

    def check_schedule(self) -> None:
        """
        Raise ScheduleError if a radius decreases in t.
        """
        prev = self.schedule(1)
        for t in range(2, self.T + 1):
            cur = self.schedule(t)
            for key in ("beta1", "beta2", "beta_bar"):
                if cur[key] < prev[key]:
                    raise ScheduleError(
                        f"{key} decreases from t = {t - 1} to t = {t}"
                    )
            prev = cur


def calibrate(
    params: VoqlParams, oracle: AnyOracle, family: ClassFamily
) -> VoqlParams:
    """
    Resolve log N_b, which depends on the largest radius, which depends on
    log N_b, by a few fixed-point iterations. Updates params in place and
    returns it.
    """
    params.eps_b = float(oracle.eps_b)
    for _ in range(FIXED_POINT_ITERS):
        log_Nb = oracle.log_class_size(family, params.beta_max())
        if np.isclose(log_Nb, params.log_Nb):
            params.log_Nb = float(log_Nb)
            break
        params.log_Nb = float(log_Nb)
    return params


def build_params(
    mdp: EpisodicMdp,
    family: ClassFamily,
    oracle: AnyOracle,
    T: int,
    delta: float = 0.1,
    c_scale: float = DEFAULT_C_SCALE,
    C_u: Optional[float] = None,
    eps: float = 0.0,
    L: Optional[float] = None,
    lam: float = 1.0,
    second_moment_target: str = "optimistic",
) -> VoqlParams:
    """
    Parameters for a run of T episodes on mdp: prepares the oracle and
    calibrates the bonus-class size.
    """
    if family.H != mdp.H:
        raise ValueError(
            f"family has {family.H} levels, the instance has {mdp.H}"
        )
    alpha = float(np.sqrt(1.0 / (T * mdp.H)))
    if L is None:
        L = max(family.L, 1.0)
    oracle.prepare(family, T, mdp.H, alpha, delta, lam)
    params = VoqlParams(
        T,
        mdp.H,
        delta=delta,
        alpha=alpha,
        lam=lam,
        eps=eps,
        L=L,
        c_scale=c_scale,
        C_u=C_u,
        log_N=family.log_size(),
        dim=family.eluder_dim_bound(T, alpha, lam),
        second_moment_target=second_moment_target,
    )
    return calibrate(params, oracle, family)
