"""
cli.py
======

Module containing the `voql` command line interface.

Commands
--------
run
    Run an experiment from a JSON configuration; flags override its keys.
gen-env
    Generate an instance and write it as JSON.
verify
    Audit the run logs of an experiment directory and write verify.json.

Exit codes are 0 on success, 1 on a configuration or missing-log error and 2
on a breach of the invariant budget when --strict is given.
"""

import argparse
import json
from pathlib import Path
from typing import Any, Optional

from ..bonus.bonus_oracle import ORACLE_NAMES
from ..env.env_exceptions import GeneratorError, InvalidMdpError
from ..env.episodic_mdp import REWARD_NOISE_MODELS, EpisodicMdp
from ..learner.learner_exceptions import EpisodeError
from ..util.print_color import Color, print_color
from ..verify.checks import audit_log, load_run
from ..verify.verify_exceptions import MissingLogError
from ..verify.violation_report import ViolationReport
from .config import ALGOS, FEATURE_KINDS, EnvSpec, load_config
from .experiment import build_instance, run_experiment
from .harness_exceptions import ConfigError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BREACH = 2

INFORMATIONAL_AUDITS = ("raw_consistency",)


def build_parser() -> argparse.ArgumentParser:
    """Parser of the three commands."""
    parser = argparse.ArgumentParser(
        prog="voql",
        description="Variance-weighted optimistic Q-learning experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment")
    run.add_argument("--config", required=True, help="JSON configuration")
    run.add_argument("--seed", type=int, help="run this seed only")
    run.add_argument("--episodes", type=int, help="episodes per seed")
    run.add_argument("--algo", choices=ALGOS)
    run.add_argument("--oracle", choices=ORACLE_NAMES)
    run.add_argument("--scale", type=float, help="c_scale")
    run.add_argument(
        "--check-invariants",
        action="store_true",
        default=None,
        help="count invariant violations online",
    )
    run.add_argument("--out", help="output directory")
    run.add_argument(
        "--strict",
        action="store_true",
        default=None,
        help="exit with 2 if the violation rate exceeds the budget",
    )
    run.add_argument("--processes", type=int, help="worker processes")
    run.add_argument(
        "--save-log",
        action="store_true",
        default=None,
        help="write a run log per seed for `voql verify`",
    )
    run.add_argument("--quiet", action="store_true", help="no console output")

    gen = sub.add_parser("gen-env", help="generate an instance")
    gen.add_argument("--kind", choices=("linear", "tabular"), default="linear")
    gen.add_argument("--d", type=int, default=3)
    gen.add_argument("--H", type=int, default=4)
    gen.add_argument("--nx", type=int, default=6)
    gen.add_argument("--na", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--feature-kind", choices=FEATURE_KINDS, default="simplex"
    )
    gen.add_argument(
        "--reward-noise", choices=REWARD_NOISE_MODELS, default="deterministic"
    )
    gen.add_argument("--out", required=True, help="instance JSON to write")

    verify = sub.add_parser("verify", help="audit the run logs of a run")
    verify.add_argument("--run", required=True, help="experiment directory")
    verify.add_argument("--budget", type=float, default=0.05)
    verify.add_argument(
        "--strict",
        action="store_true",
        help="exit with 2 if an audit exceeds the budget",
    )
    verify.add_argument("--quiet", action="store_true")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """
    Entry point of the `voql` command; returns the exit code.
    """
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "gen-env":
            return cmd_gen_env(args)
        return cmd_verify(args)
    except (ConfigError, MissingLogError) as err:
        print_color(f"error: {err.message}", Color.RED)
        return EXIT_ERROR
    except EpisodeError as err:
        print_color(f"error: {err}", Color.RED)
        return EXIT_ERROR


def cmd_run(args: argparse.Namespace) -> int:
    """`voql run`"""
    config = load_config(args.config).with_overrides(
        seeds=None if args.seed is None else [args.seed],
        T=args.episodes,
        algo=args.algo,
        oracle=args.oracle,
        c_scale=args.scale,
        check_invariants=args.check_invariants,
        out_dir=args.out,
        strict=args.strict,
        processes=args.processes,
        save_log=args.save_log,
    )
    summary = run_experiment(config, verbose=not args.quiet)
    if config.strict and summary["violations"]["breach"]:
        return EXIT_BREACH
    return EXIT_OK


def cmd_gen_env(args: argparse.Namespace) -> int:
    """`voql gen-env`"""
    env = EnvSpec(
        kind=args.kind,
        d=args.d,
        H=args.H,
        nX=args.nx,
        nA=args.na,
        seed=args.seed,
        feature_kind=args.feature_kind,
        reward_noise=args.reward_noise,
    )
    try:
        mdp = build_instance(env)
    except GeneratorError as err:
        raise ConfigError(err.message) from err
    try:
        mdp.save_json(args.out)
    except OSError as err:
        raise ConfigError(f"cannot write {args.out}: {err}") from err
    print_color(f"wrote {mdp} to {args.out}", Color.GREEN)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """`voql verify`"""
    verbose = not args.quiet
    run_dir = Path(args.run)
    instance = run_dir / "instance.json"
    if not instance.is_file():
        raise MissingLogError(f"no instance.json in {run_dir}")
    try:
        mdp = EpisodicMdp.load_json(instance)
    except (OSError, ValueError, KeyError, InvalidMdpError) as err:
        raise MissingLogError(f"cannot read {instance}: {err}") from err
    logs = sorted(run_dir.glob("runlog_*.npz"))
    if not logs:
        raise MissingLogError(
            f"no run logs in {run_dir}; run with --save-log first"
        )
    merged: dict[str, ViolationReport] = {}
    per_seed: dict[str, list[dict[str, Any]]] = {}
    for filename in logs:
        print_color(f"auditing {filename.name}", Color.GREEN, verbose)
        reports = audit_log(load_run(filename), mdp)
        per_seed[filename.stem] = [r.to_dict() for r in reports]
        for r in reports:
            merged[r.name] = merged[r.name].merge(r) if r.name in merged else r

    breach = False
    for name, report in merged.items():
        if name in INFORMATIONAL_AUDITS:
            print_color(
                f"{name:<24} {report.detail}", Color.YELLOW, verbose=verbose
            )
            continue
        if not report.verdict(args.budget, verbose):
            breach = True
    result = {
        "budget": args.budget,
        "breach": breach,
        "reports": [r.to_dict() for r in merged.values()],
        "per_log": per_seed,
    }
    with open(run_dir / "verify.json", "w", encoding="utf-8") as file:
        json.dump(result, file, indent=2)
    if args.strict and breach:
        return EXIT_BREACH
    return EXIT_OK
