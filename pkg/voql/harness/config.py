"""
config.py
=========

Module containing ExperimentConfig, the configuration of a batch experiment,
loaded from a single JSON file. Every CLI flag of `voql run` shadows one key
of the file; flags win.

Example
-------
{
    "env": {"kind": "linear", "d": 3, "H": 4, "nX": 6, "nA": 3, "seed": 0},
    "algo": "voql",
    "oracle": "elliptical",
    "T": 2000,
    "c_scale": 0.05,
    "seeds": [0, 1, 2, 3, 4],
    "out_dir": "results/reference"
}
"""

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional

from ..bonus.bonus_oracle import ORACLE_NAMES
from ..env.episodic_mdp import REWARD_NOISE_MODELS
from ..learner.params import DEFAULT_C_SCALE, SECOND_MOMENT_TARGETS
from .harness_exceptions import ConfigError

ENV_KINDS = ("linear", "tabular", "file")
FEATURE_KINDS = ("simplex", "one_hot")
ALGOS = ("voql", "lsvi-ucb", "uniform-random")
CLASS_KINDS = ("auto", "linear", "tabular")


@dataclass
class EnvSpec:
    """
    Instance to run on: a generated instance or a JSON file.
    """

    kind: str = "linear"
    d: int = 3
    H: int = 4
    nX: int = 6
    nA: int = 3
    seed: int = 0
    path: Optional[str] = None
    feature_kind: str = "simplex"
    reward_noise: str = "deterministic"


@dataclass
class ExperimentConfig:
    """
    Configuration of a batch experiment.

    Attributes
    ----------
    env : EnvSpec
        Instance specification
    algo : str
        "voql", "lsvi-ucb" or "uniform-random"
    oracle : str
        Bonus oracle of the learner: "vs", "elliptical", "subsample", or
        "zero" (negative control)
    class_kind : str
        Function classes: "linear", "tabular", or "auto" (linear when the
        instance has features)
    T : int
        Episodes per seed
    c_scale, C_u, C_sens, delta, eps_c, eps, L, grid_step : float
        Parameter overrides; None keeps the default
    second_moment_target : str
        Target of the second-moment fit
    check_invariants : bool
        Count invariant violations online
    out_dir : str
        Output directory
    seeds : list[int]
        One run per seed
    processes : int
        Worker processes for the seeds
    save_log : bool
        Write a run log per seed, needed by `voql verify`
    strict : bool
        Treat an invariant rate above `budget` as a failure
    budget : float
        Allowed invariant violation rate
    """

    env: EnvSpec = field(default_factory=EnvSpec)
    algo: str = "voql"
    oracle: str = "elliptical"
    class_kind: str = "auto"
    T: int = 100
    c_scale: float = DEFAULT_C_SCALE
    C_u: Optional[float] = None
    C_sens: float = 1.0
    delta: float = 0.1
    eps_c: Optional[float] = None
    eps: float = 0.0
    L: Optional[float] = None
    grid_step: float = 0.1
    second_moment_target: str = "optimistic"
    check_invariants: bool = False
    out_dir: str = "results"
    seeds: list[int] = field(default_factory=lambda: [0])
    processes: int = 1
    save_log: bool = False
    strict: bool = False
    budget: float = 0.05

    # SETUP ##################################################################

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        """
        Build and validate a configuration; unknown keys are errors.
        """
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"unknown configuration key '{key}'")
        values = dict(data)
        env = values.pop("env", {})
        if not isinstance(env, dict):
            raise ConfigError("'env' must be a JSON object")
        env_known = {f.name for f in fields(EnvSpec)}
        for key in env:
            if key not in env_known:
                raise ConfigError(f"unknown configuration key 'env.{key}'")
        config = cls(env=EnvSpec(**env), **values)
        config.validate()
        return config

    def to_dict(self) -> dict[str, Any]:
        """JSON-compatible form."""
        return asdict(self)

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """
        Copy with the given keys replaced; None values are ignored. Keys of
        the form "env_<name>" replace env.<name>.
        """
        top: dict[str, Any] = {}
        env: dict[str, Any] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key.startswith("env_"):
                env[key[len("env_") :]] = value
            else:
                top[key] = value
        try:
            config = replace(self, env=replace(self.env, **env), **top)
        except TypeError as err:
            raise ConfigError(str(err)) from err
        config.validate()
        return config

    # VALIDATION #############################################################

    def validate(self) -> None:
        """
        Raise ConfigError naming the first offending key.
        """
        self._validate_env()
        _check_choice("algo", self.algo, ALGOS)
        _check_choice("oracle", self.oracle, ORACLE_NAMES)
        _check_choice("class_kind", self.class_kind, CLASS_KINDS)
        _check_choice(
            "second_moment_target",
            self.second_moment_target,
            SECOND_MOMENT_TARGETS,
        )
        _check_int("T", self.T, 1)
        _check_int("processes", self.processes, 1)
        if not isinstance(self.seeds, list) or len(self.seeds) == 0:
            raise ConfigError("'seeds' must be a nonempty list of integers")
        for s in self.seeds:
            _check_int("seeds", s, 0)
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("'seeds' must not repeat")
        _check_number("c_scale", self.c_scale, 0.0)
        _check_number("C_sens", self.C_sens, 1.0)
        _check_number("eps", self.eps, 0.0)
        _check_number("grid_step", self.grid_step, 0.0, strict=True)
        _check_number("budget", self.budget, 0.0)
        if self.C_u is not None:
            _check_number("C_u", self.C_u, 0.0)
        if self.eps_c is not None:
            _check_number("eps_c", self.eps_c, 0.0, strict=True)
        if self.L is not None:
            _check_number("L", self.L, 1.0)
        _check_number("delta", self.delta, 0.0, strict=True)
        if not self.delta < 1:
            raise ConfigError("'delta' must lie in (0, 1)")
        if self.budget > 1:
            raise ConfigError("'budget' must lie in [0, 1]")
        linear = self.uses_linear_classes()
        if self.algo == "voql" and self.oracle == "elliptical" and not linear:
            raise ConfigError(
                "'oracle' elliptical requires linear classes (features)"
            )
        if self.algo == "lsvi-ucb" and self.env.kind == "tabular":
            raise ConfigError(
                "'algo' lsvi-ucb requires an instance with features"
            )

    def _validate_env(self) -> None:
        env = self.env
        _check_choice("env.kind", env.kind, ENV_KINDS)
        _check_choice("env.feature_kind", env.feature_kind, FEATURE_KINDS)
        _check_choice("env.reward_noise", env.reward_noise, REWARD_NOISE_MODELS)
        if env.kind == "file":
            if env.path is None:
                raise ConfigError(
                    "'env.path' is required when env.kind is file"
                )
            if not Path(env.path).is_file():
                raise ConfigError(f"'env.path' {env.path} does not exist")
            return
        _check_int("env.H", env.H, 1)
        _check_int("env.nX", env.nX, 2)
        _check_int("env.nA", env.nA, 2)
        _check_int("env.seed", env.seed, 0)
        if env.kind == "linear":
            _check_int("env.d", env.d, 1)

    def uses_linear_classes(self) -> bool:
        """
        True if the learner runs on linear classes. For instance files this
        assumes features; the experiment checks once the file is loaded.
        """
        if self.class_kind == "auto":
            return self.env.kind in ("linear", "file")
        return self.class_kind == "linear"


def load_config(filename: str | Path) -> ExperimentConfig:
    """
    Read an ExperimentConfig from a JSON file. Decoding errors report the
    line and column.
    """
    try:
        with open(filename, "r", encoding="utf-8") as file:
            text = file.read()
    except OSError as err:
        raise ConfigError(f"cannot read {filename}: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(
            f"{filename}: line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    try:
        return ExperimentConfig.from_dict(data)
    except ConfigError as err:
        raise ConfigError(f"{filename}: {err.message}") from err
    except TypeError as err:
        raise ConfigError(f"{filename}: {err}") from err


def _check_choice(key: str, value: Any, choices: tuple[str, ...]) -> None:
    if value not in choices:
        raise ConfigError(f"'{key}' must be one of {choices}, got {value!r}")


def _check_int(key: str, value: Any, lo: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{key}' must be an integer, got {value!r}")
    if value < lo:
        raise ConfigError(f"'{key}' must be at least {lo}, got {value}")


def _check_number(
    key: str, value: Any, lo: float, strict: bool = False
) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {value!r}")
    if value < lo or (strict and value == lo):
        bound = "greater than" if strict else "at least"
        raise ConfigError(f"'{key}' must be {bound} {lo}, got {value}")
