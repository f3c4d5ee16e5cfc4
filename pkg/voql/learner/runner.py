"""
runner.py
=========

Module containing the outer loop of the learner and the per-episode
RegretRecord.

Every episode runs the backward pass, evaluates the exploration policy
exactly on the instance, rolls it out, computes the weights of the visited
points and appends them to the datasets. The first episode acts uniformly at
random with sigma = 2.
"""

from dataclasses import astuple, dataclass
from typing import Any, Optional

import numpy as np
from tqdm import tqdm

from ..bonus.bonus_oracle import (
    SLOT_UNIT,
    SLOT_WEIGHTED,
    ConsistentOracle,
    SubsampleOracle,
)
from ..env.dynamic_programming import (
    OptimalSolution,
    conditional_moments,
    evaluate_exploration_policy,
    policy_value,
    solve_optimal,
    uniform_policy,
)
from ..env.episodic_mdp import EpisodicMdp
from ..fclass.class_family import ClassFamily
from ..util.print_color import Color, print_color
from .backward_pass import backward_pass
from .exploration import select_action
from .learner_exceptions import EpisodeError
from .params import AnyOracle, VoqlParams
from .run_log import RunLog
from .variance import sigma_bar, sigma_estimate
from .voql_state import VoqlState

INVARIANT_TOL = 1e-9
RECORD_FIELDS = (
    "episode",
    "return",
    "v1_exact",
    "inst_regret",
    "cum_regret",
    "h_t",
    "mean_sigma_bar",
    "distinct",
    "violations",
)


@dataclass
class RegretRecord:
    """
    Outcome of one episode.

    The instantaneous regret is E_{x ~ mu} V*(x) - V_t(x) with V_t the exact
    value of the policy played; the cumulative regret is its running sum.
    """

    episode: int
    realized_return: float
    v1_exact: float
    inst_regret: float
    cum_regret: float
    h_t: int
    mean_sigma_bar: float
    distinct: int = 0
    violations: int = 0

    def as_row(self) -> tuple[Any, ...]:
        """Values in the order of RECORD_FIELDS."""
        return astuple(self)


def run(
    mdp: EpisodicMdp,
    family: ClassFamily,
    oracle: AnyOracle,
    params: VoqlParams,
    rng: np.random.Generator,
    check_invariants: bool = False,
    log: Optional[RunLog] = None,
    verbose: bool = False,
) -> list[RegretRecord]:
    """
    Run the learner for params.T episodes.

    Parameters
    ----------
    mdp : EpisodicMdp
        The instance
    family : ClassFamily
        Value and second-moment classes, one per level
    oracle : BonusOracle | ConsistentOracle
        Bonus oracle; prepared (and reset) here
    params : VoqlParams
        Run constants
    rng : np.random.Generator
        Source of all randomness of the run
    check_invariants : bool, optional
        Count monotonicity, variance and boundary violations per episode
    log : RunLog, optional
        Receives a snapshot of every episode
    verbose : bool, optional
        Progress bar and status lines, by default False

    Returns
    -------
    records : list[RegretRecord]
        One record per episode
    """
    if family.H != mdp.H or params.H != mdp.H:
        raise ValueError("instance, family and params disagree on H")
    if family.value[0].num_states != mdp.num_states:
        raise ValueError("family and instance disagree on the state count")
    if family.value[0].num_actions != mdp.num_actions:
        raise ValueError("family and instance disagree on the action count")
    oracle.prepare(
        family, params.T, params.H, params.alpha, params.delta, params.lam
    )
    params.check_schedule()
    solution = solve_optimal(mdp)
    v_star = solution.initial_value(mdp)
    uniform_value = float(mdp.mu @ policy_value(mdp, uniform_policy(mdp))[0])
    state = VoqlState(family, params)
    print_color(
        f"running {params.T} episodes, V* = {v_star:.6f}", Color.GREEN, verbose
    )

    records: list[RegretRecord] = []
    cum = 0.0
    worst_completeness = 0.0
    episodes = range(1, params.T + 1)
    for t in tqdm(episodes) if verbose else episodes:
        try:
            rec, completeness = _run_episode(
                mdp,
                family,
                oracle,
                state,
                solution,
                uniform_value,
                rng,
                check_invariants,
                log,
            )
        except Exception as err:  # pylint: disable=broad-exception-caught
            raise EpisodeError(t, err) from err
        rec.inst_regret = v_star - rec.v1_exact
        cum += rec.inst_regret
        rec.cum_regret = cum
        records.append(rec)
        worst_completeness = max(worst_completeness, completeness)

    if isinstance(oracle, ConsistentOracle) and oracle.raw_violations > 0:
        print_color(
            f"raw bonus consistency violations: {oracle.raw_violations}",
            Color.YELLOW,
            verbose,
        )
    if worst_completeness > params.eps + INVARIANT_TOL:
        print_color(
            f"largest completeness error {worst_completeness:.3e} "
            + f"exceeds eps = {params.eps}",
            Color.YELLOW,
            verbose,
        )
    return records


def _run_episode(
    mdp: EpisodicMdp,
    family: ClassFamily,
    oracle: AnyOracle,
    state: VoqlState,
    solution: OptimalSolution,
    uniform_value: float,
    rng: np.random.Generator,
    check_invariants: bool,
    log: Optional[RunLog],
) -> tuple[RegretRecord, float]:
    H = mdp.H
    p = state.params
    t = state.t + 1
    state.begin_episode(t)
    raw_before = _raw_violations(oracle)
    backward_pass(state, family, oracle)
    if t == 1:
        v1 = uniform_value
    else:
        v1 = evaluate_exploration_policy(
            mdp, state.f1[:H], state.f2[:H], state.u
        )

    visit = {
        key: np.zeros(H)
        for key in (
            "r",
            "sigma",
            "sigma_bar",
            "d_unit",
            "d_weighted",
            "f2_z",
            "fm2_z",
        )
    }
    xs = np.zeros(H, dtype=int)
    acts = np.zeros(H, dtype=int)
    x_next = np.zeros(H, dtype=int)
    x = mdp.sample_initial(rng)
    switched = False
    for h in range(H):
        if t == 1:
            a = int(rng.integers(mdp.num_actions))
        else:
            a, switched = select_action(state, x, h, switched)
        r, xn = mdp.step(h, x, a, rng)
        sigma = sigma_estimate(state, (x, a), h)
        xs[h], acts[h], x_next[h] = x, a, xn
        visit["r"][h] = r
        visit["sigma"][h] = sigma
        visit["sigma_bar"][h] = sigma_bar(state, (x, a), h, sigma)
        visit["d_unit"][h] = state.unit_ctx[h].width(x, a)
        visit["d_weighted"][h] = state.weighted_ctx[h].width(x, a)
        visit["f2_z"][h] = state.f2[h, x, a]
        visit["fm2_z"][h] = state.fm2[h, x, a]
        x = xn

    completeness = _completeness(mdp, state)
    violations = 0
    if check_invariants:
        violations = _count_violations(mdp, state, solution, xs, acts, visit)

    beta1, beta2 = p.beta1(t), p.beta2(t)
    for h in range(H):
        fc = family.value[h]
        sb = float(visit["sigma_bar"][h])
        x, a = int(xs[h]), int(acts[h])
        state.record(h, x, a, float(visit["r"][h]), int(x_next[h]), sb)
        oracle.observe(h, SLOT_WEIGHTED, fc, x, a, sb, beta1, rng)
        oracle.observe(h, SLOT_UNIT, fc, x, a, 1.0, beta2, rng)

    if log is not None:
        snapshot: dict[str, Any] = dict(visit)
        snapshot.update(
            x=xs,
            a=acts,
            x_next=x_next,
            completeness=completeness,
            u=state.u,
            h_t=state.h_t,
            raw_violations=_raw_violations(oracle) - raw_before,
        )
        snapshot.update(p.schedule(t))
        if log.keep_tables:
            snapshot.update(_tables(state, oracle))
        log.append(snapshot)

    rec = RegretRecord(
        episode=t,
        realized_return=float(np.sum(visit["r"])),
        v1_exact=v1,
        inst_regret=0.0,
        cum_regret=0.0,
        h_t=state.h_t,
        mean_sigma_bar=float(np.mean(visit["sigma_bar"])),
        distinct=_distinct(oracle),
        violations=violations,
    )
    return rec, float(np.max(completeness))


def _completeness(mdp: EpisodicMdp, state: VoqlState) -> np.ndarray:
    """
    Per-level sup |ghat - T_2 f^{h+1}| of the second-moment fits.
    """
    over_optimistic = state.params.second_moment_target == "over_optimistic"
    base = state.f2 if over_optimistic else state.f1
    out = np.zeros(mdp.H)
    for h in range(mdp.H):
        mean, var = conditional_moments(mdp, np.max(base[h + 1], axis=1), h)
        out[h] = np.max(np.abs(state.ghat[h] - (var + mean**2)))
    return out


def _count_violations(
    mdp: EpisodicMdp,
    state: VoqlState,
    solution: OptimalSolution,
    xs: np.ndarray,
    acts: np.ndarray,
    visit: dict[str, np.ndarray],
) -> int:
    H = mdp.H
    Q = solution.Qstar
    tol = INVARIANT_TOL
    count = int(np.sum(state.fm2[:H] > Q + tol))
    count += int(np.sum(Q > state.f1[:H] + tol))
    count += int(np.sum(state.f1[:H] > state.f2[:H] + tol))
    for h in range(H):
        _, var = conditional_moments(mdp, solution.Vstar[h + 1], h)
        if visit["sigma"][h] ** 2 < var[xs[h], acts[h]] - tol:
            count += 1
    if not state.check_boundary():
        count += 1
    return count


def _tables(state: VoqlState, oracle: AnyOracle) -> dict[str, np.ndarray]:
    H = state.H
    b1 = np.array([_table(state.b1[h]) for h in range(H)])
    b2 = np.array([_table(state.b2[h]) for h in range(H)])
    b1_raw, b2_raw = b1, b2
    if isinstance(oracle, ConsistentOracle):
        b1_raw = np.array(
            [oracle.last_raw[(h, SLOT_WEIGHTED)].table for h in range(H)]
        )
        b2_raw = np.array(
            [oracle.last_raw[(h, SLOT_UNIT)].table for h in range(H)]
        )
    return {
        "f1": state.f1[:H].copy(),
        "f2": state.f2[:H].copy(),
        "fm2": state.fm2[:H].copy(),
        "fhat_m2": state.fhat_m2.copy(),
        "ghat": state.ghat.copy(),
        "b1": b1,
        "b2": b2,
        "b1_raw": b1_raw,
        "b2_raw": b2_raw,
    }


def _table(b: Any) -> np.ndarray:
    if b is None:
        raise ValueError("bonus requested before the backward pass")
    return np.asarray(b.table)


def _raw_violations(oracle: AnyOracle) -> int:
    if isinstance(oracle, ConsistentOracle):
        return oracle.raw_violations
    return 0


def _distinct(oracle: AnyOracle) -> int:
    inner = oracle.inner if isinstance(oracle, ConsistentOracle) else oracle
    if isinstance(inner, SubsampleOracle):
        return int(sum(len(s) for s in inner.sets.values()))
    return 0


def run_log_meta(params: VoqlParams) -> dict[str, float]:
    """
    Metadata of a RunLog for a run with these parameters.
    """
    return {
        "alpha": params.alpha,
        "lam": params.lam,
        "L": params.L,
        "eps": params.eps,
        "c_scale": params.c_scale,
        "H": float(params.H),
        "T": float(params.T),
    }
