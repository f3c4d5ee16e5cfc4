"""
experiment.py
=============

Module containing run_experiment, which runs one algorithm on one instance
for every seed of an ExperimentConfig and writes the results:

    <out_dir>/instance.json       the instance, for reproducibility
    <out_dir>/config.json         the resolved configuration
    <out_dir>/regret_<seed>.csv   one row per episode
    <out_dir>/runlog_<seed>.npz   per-episode snapshots (save_log only)
    <out_dir>/summary.json        checkpoint statistics and violation totals

All randomness of a seed flows from numpy.random.default_rng(seed), so the
same configuration and seed reproduce byte-identical CSV files.
"""

import json
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Optional

import numpy as np

from ..bonus.bonus_exceptions import BonusError
from ..bonus.bonus_oracle import make_oracle
from ..env.env_exceptions import InvalidMdpError
from ..env.episodic_mdp import EpisodicMdp
from ..env.generators import gen_linear_mdp, gen_tabular_mdp
from ..fclass.class_family import ClassFamily, linear_family, tabular_family
from ..fclass.fclass_exceptions import CoverSizeError
from ..learner.params import build_params
from ..learner.run_log import RunLog
from ..learner.runner import RegretRecord, run, run_log_meta
from ..util.print_color import Color, print_color
from .baselines import lsvi_ucb_baseline, uniform_random_baseline
from .config import EnvSpec, ExperimentConfig
from .harness_exceptions import ConfigError
from .summary import comparisons_per_episode, summarize

CSV_COLUMNS = (
    "episode",
    "return",
    "v1_exact",
    "inst_regret",
    "cum_regret",
    "h_t",
    "mean_sigma_bar",
    "violations",
)
CSV_FORMAT = "%.17g"


def build_instance(env: EnvSpec) -> EpisodicMdp:
    """
    Generate the instance of an EnvSpec, or load it from its file.
    """
    if env.kind == "file":
        if env.path is None:
            raise ConfigError("'env.path' is required when env.kind is file")
        try:
            return EpisodicMdp.load_json(env.path)
        except (OSError, ValueError, KeyError, InvalidMdpError) as err:
            raise ConfigError(
                f"cannot load instance {env.path}: {err}"
            ) from err
    if env.kind == "tabular":
        return gen_tabular_mdp(
            env.H, env.nX, env.nA, env.seed, reward_noise=env.reward_noise
        )
    return gen_linear_mdp(
        env.d,
        env.H,
        env.nX,
        env.nA,
        env.seed,
        feature_kind=env.feature_kind,
        reward_noise=env.reward_noise,
    )


def build_family(config: ExperimentConfig, mdp: EpisodicMdp) -> ClassFamily:
    """
    Function classes of the learner: linear over the instance features, or
    product grids over the tables.
    """
    linear = config.class_kind == "linear" or (
        config.class_kind == "auto" and mdp.is_linear
    )
    if linear and not mdp.is_linear:
        raise ConfigError("linear classes need an instance with features")
    if config.oracle == "elliptical" and not linear:
        raise ConfigError(
            "'oracle' elliptical requires linear classes (features)"
        )
    if not linear:
        return tabular_family(mdp, config.grid_step)
    try:
        return linear_family(mdp, config.eps_c, config.T)
    except CoverSizeError as err:
        raise ConfigError(f"'eps_c': {err.message}") from err


def check_setup(config: ExperimentConfig, mdp: EpisodicMdp) -> None:
    """
    Raise ConfigError if the configured oracle cannot serve the configured
    classes on mdp, before any episode runs.
    """
    if config.algo != "voql":
        return
    family = build_family(config, mdp)
    try:
        make_oracle(config.oracle, config.C_sens).check_family(family)
    except BonusError as err:
        raise ConfigError(f"'oracle' {config.oracle}: {err.message}") from err


def run_seed(
    config: ExperimentConfig,
    mdp: EpisodicMdp,
    seed: int,
    verbose: bool = False,
) -> tuple[list[RegretRecord], Optional[RunLog]]:
    """
    Records of one seed, and its run log when config.save_log is set.
    """
    rng = np.random.default_rng(seed)
    if config.algo == "uniform-random":
        return uniform_random_baseline(mdp, config.T, rng, verbose), None
    if config.algo == "lsvi-ucb":
        if not mdp.is_linear:
            raise ConfigError(
                "'algo' lsvi-ucb requires an instance with features"
            )
        records = lsvi_ucb_baseline(
            mdp,
            config.T,
            rng,
            c_scale=config.c_scale,
            delta=config.delta,
            verbose=verbose,
        )
        return records, None
    family = build_family(config, mdp)
    oracle = make_oracle(config.oracle, config.C_sens)
    params = build_params(
        mdp,
        family,
        oracle,
        config.T,
        delta=config.delta,
        c_scale=config.c_scale,
        C_u=config.C_u,
        eps=config.eps,
        L=config.L,
        second_moment_target=config.second_moment_target,
    )
    log = RunLog(run_log_meta(params)) if config.save_log else None
    records = run(
        mdp,
        family,
        oracle,
        params,
        rng,
        check_invariants=config.check_invariants,
        log=log,
        verbose=verbose,
    )
    return records, log


def write_records(records: list[RegretRecord], filename: str | Path) -> None:
    """
    Write one CSV row per episode with the columns CSV_COLUMNS.
    """
    rows = np.array(
        [
            [
                r.episode,
                r.realized_return,
                r.v1_exact,
                r.inst_regret,
                r.cum_regret,
                r.h_t,
                r.mean_sigma_bar,
                r.violations,
            ]
            for r in records
        ],
        dtype=float,
    ).reshape(-1, len(CSV_COLUMNS))
    np.savetxt(
        filename,
        rows,
        fmt=CSV_FORMAT,
        delimiter=",",
        header=",".join(CSV_COLUMNS),
        comments="",
    )


def run_experiment(
    config: ExperimentConfig, verbose: bool = True
) -> dict[str, Any]:
    """
    Run every seed of the configuration and write the results.

    Parameters
    ----------
    config : ExperimentConfig
        Validated configuration
    verbose : bool, optional
        Status lines and progress bars, by default True

    Returns
    -------
    summary : dict[str, Any]
        The content of summary.json
    """
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise ConfigError(f"cannot create {out}: {err}") from err
    mdp = build_instance(config.env)
    check_setup(config, mdp)
    print_color(f"instance: {mdp}", Color.GREEN, verbose)
    try:
        mdp.save_json(out / "instance.json")
        _write_json(config.to_dict(), out / "config.json")
    except OSError as err:
        raise ConfigError(f"cannot write to {out}: {err}") from err

    if config.processes == 1:
        runs = run_experiment_sequential(config, mdp, verbose)
    elif config.processes > 1:
        runs = run_experiment_parallel(config, mdp, verbose)
    else:
        raise ValueError("processes must be a positive integer")

    comparisons = 0
    if config.algo == "voql" and config.check_invariants:
        comparisons = comparisons_per_episode(
            mdp.H, mdp.num_states, mdp.num_actions
        )
    summary = summarize(runs, mdp.H, comparisons, config.budget)
    summary["algo"] = config.algo
    summary["instance"] = mdp.name
    if config.algo == "voql" and config.oracle == "subsample":
        summary["distinct"] = {str(s): runs[s][-1].distinct for s in runs}
    _write_json(summary, out / "summary.json")
    if summary["violations"]["breach"]:
        print_color(
            f"violation rate {summary['violations']['rate']:.3e} "
            + f"exceeds the budget {config.budget}",
            Color.RED,
            verbose,
        )
    return summary


def run_experiment_sequential(
    config: ExperimentConfig, mdp: EpisodicMdp, verbose: bool = True
) -> dict[int, list[RegretRecord]]:
    """
    Run the seeds one after the other in this process.
    """
    runs: dict[int, list[RegretRecord]] = {}
    for seed in config.seeds:
        print_color(f"seed {seed}", Color.GREEN, verbose)
        runs[seed] = _run_and_write(config, mdp, seed, verbose)
    return runs


def run_experiment_parallel(
    config: ExperimentConfig, mdp: EpisodicMdp, verbose: bool = True
) -> dict[int, list[RegretRecord]]:
    """
    Run the seeds on a pool of config.processes worker processes. Each
    worker rebuilds its state from the serialized configuration and
    instance, and writes its own files.
    """
    print_color(
        f"running {len(config.seeds)} seeds on {config.processes} processes",
        Color.GREEN,
        verbose,
    )
    jobs = [(config.to_dict(), mdp.to_dict(), seed) for seed in config.seeds]
    with Pool(min(config.processes, len(jobs))) as pool:
        results = pool.map(_seed_job, jobs)
    return dict(results)


def _seed_job(
    job: tuple[dict[str, Any], dict[str, Any], int]
) -> tuple[int, list[RegretRecord]]:
    config_data, mdp_data, seed = job
    config = ExperimentConfig.from_dict(config_data)
    mdp = EpisodicMdp.from_dict(mdp_data)
    return seed, _run_and_write(config, mdp, seed, verbose=False)


def _run_and_write(
    config: ExperimentConfig, mdp: EpisodicMdp, seed: int, verbose: bool
) -> list[RegretRecord]:
    out = Path(config.out_dir)
    records, log = run_seed(config, mdp, seed, verbose)
    write_records(records, out / f"regret_{seed}.csv")
    if log is not None:
        log.save(out / f"runlog_{seed}.npz")
    return records


def _write_json(data: dict[str, Any], filename: Path) -> None:
    with open(filename, "w", encoding="utf-8") as file:
        json.dump(data, file, indent=2)
