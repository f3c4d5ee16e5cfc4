"""
test_harness.py
===============

Tests the experiment configuration, the batch runner, the baselines, the
summary statistics and the command-line interface.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from voql.env import EpisodicMdp, mdplib
from voql.harness import (
    ConfigError,
    EnvSpec,
    ExperimentConfig,
    build_instance,
    check_setup,
    checkpoints,
    fit_exponent,
    is_concave,
    load_config,
    run_experiment,
    run_seed,
)
from voql.harness.cli import main

SMALL_TABULAR = {"kind": "tabular", "H": 2, "nX": 3, "nA": 2, "seed": 1}


def _config(out_dir: Path, **values: object) -> ExperimentConfig:
    data = {"env": dict(SMALL_TABULAR), "oracle": "vs", "T": 6}
    data["out_dir"] = str(out_dir)
    data.update(values)
    return ExperimentConfig.from_dict(data)


def _write_config(filename: Path, **values: object) -> Path:
    data = {"env": dict(SMALL_TABULAR), "oracle": "vs", "T": 5}
    data.update(values)
    filename.write_text(json.dumps(data), encoding="utf-8")
    return filename


def test_config_decode_error(tmp_path: Path) -> None:
    """
    Malformed JSON is reported with its line and column.
    """
    filename = tmp_path / "bad.json"
    filename.write_text('{\n  "T": 5,\n  oops\n}\n', encoding="utf-8")
    with pytest.raises(ConfigError) as err:
        load_config(filename)
    assert "line 3" in err.value.message
    assert "column 3" in err.value.message
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")


def test_config_validation(tmp_path: Path) -> None:
    """
    Unknown keys, out-of-range values and impossible combinations name the
    offending key.
    """
    with pytest.raises(ConfigError) as err:
        _config(tmp_path, episodes=5)
    assert "episodes" in err.value.message
    with pytest.raises(ConfigError) as err:
        _config(tmp_path, T=0)
    assert "'T'" in err.value.message
    with pytest.raises(ConfigError) as err:
        _config(tmp_path, seeds=[0, 0])
    assert "seeds" in err.value.message
    with pytest.raises(ConfigError) as err:
        _config(tmp_path, oracle="elliptical")
    assert "elliptical" in err.value.message
    with pytest.raises(ConfigError):
        _config(tmp_path, algo="lsvi-ucb")
    with pytest.raises(ConfigError):
        _config(tmp_path, processes=0)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"env": {"kind": "file"}})


def test_config_overrides(tmp_path: Path) -> None:
    """
    Overrides replace keys, env_ keys reach the instance spec and None
    keeps the file value.
    """
    config = _config(tmp_path).with_overrides(T=9, env_seed=3, c_scale=None)
    assert config.T == 9
    assert config.env.seed == 3
    assert config.c_scale == _config(tmp_path).c_scale
    with pytest.raises(ConfigError):
        config.with_overrides(T=-1)


def test_run_experiment_files(tmp_path: Path) -> None:
    """
    An experiment writes the instance, the configuration, one CSV per seed
    and the summary.
    """
    config = _config(tmp_path / "out", seeds=[0, 1])
    summary = run_experiment(config, verbose=False)
    out = tmp_path / "out"
    for name in ("instance.json", "config.json", "summary.json"):
        assert (out / name).is_file()
    for seed in (0, 1):
        filename = out / f"regret_{seed}.csv"
        rows = np.loadtxt(filename, delimiter=",", skiprows=1)
        assert rows.shape == (6, 8)
        assert np.array_equal(rows[:, 0], np.arange(1, 7))
    assert summary["seeds"] == [0, 1]
    assert summary["T"] == 6
    assert [c["episode"] for c in summary["checkpoints"]] == [1, 3, 6]
    loaded = EpisodicMdp.load_json(out / "instance.json")
    assert loaded.H == SMALL_TABULAR["H"]


def test_run_experiment_deterministic(tmp_path: Path) -> None:
    """
    The same configuration and seed give byte-identical CSV files.
    """
    texts = []
    for name in ("a", "b"):
        config = _config(tmp_path / name, seeds=[4])
        run_experiment(config, verbose=False)
        texts.append((tmp_path / name / "regret_4.csv").read_text())
    assert texts[0] == texts[1]


def test_uniform_random_single_action(tmp_path: Path) -> None:
    """
    Uniform play is optimal when there is one action.
    """
    config = _config(tmp_path, algo="uniform-random", T=5)
    records, log = run_seed(config, mdplib.single_action(H=2, nX=3), 0)
    assert log is None
    assert len(records) == 5
    for rec in records:
        assert rec.inst_regret == pytest.approx(0.0, abs=1e-12)
        assert rec.h_t == 3
        assert np.isnan(rec.mean_sigma_bar)


def test_lsvi_ucb_records(tmp_path: Path) -> None:
    """
    The linear baseline produces one non-negative regret per episode.
    """
    env = {"kind": "linear", "d": 2, "H": 2, "nX": 3, "nA": 2, "seed": 0}
    config = _config(tmp_path, env=env, algo="lsvi-ucb", T=5)
    records, _ = run_seed(config, build_instance(config.env), 0)
    assert len(records) == 5
    assert all(rec.inst_regret >= -1e-12 for rec in records)


def test_summary_statistics() -> None:
    """
    Checkpoints, the fitted exponent and the concavity test.
    """
    assert checkpoints(8) == [2, 4, 8]
    assert checkpoints(2) == [1, 1, 2]
    t = np.arange(1, 201, dtype=float)
    assert fit_exponent(np.sqrt(t)) == pytest.approx(0.5)
    assert fit_exponent(np.zeros(10)) is None
    assert is_concave(np.sqrt(t))
    assert not is_concave(t**2)


def test_cli_gen_env(tmp_path: Path) -> None:
    """
    gen-env writes a loadable instance; impossible sizes exit with 1.
    """
    out = tmp_path / "env.json"
    argv = ["gen-env", "--kind", "linear", "--d", "2", "--H", "2"]
    assert main(argv + ["--nx", "3", "--na", "2", "--out", str(out)]) == 0
    mdp = EpisodicMdp.load_json(out)
    assert mdp.is_linear
    assert mdp.d == 2
    bad = ["gen-env", "--d", "9", "--nx", "3", "--na", "2"]
    assert main(bad + ["--out", str(tmp_path / "bad.json")]) == 1


def test_cli_run_and_verify(tmp_path: Path) -> None:
    """
    A run with logs exits with 0, and so does the audit of its logs.
    """
    config = _write_config(tmp_path / "config.json")
    out = tmp_path / "run"
    argv = ["run", "--config", str(config), "--out", str(out)]
    assert main(argv + ["--seed", "2", "--save-log", "--quiet"]) == 0
    assert (out / "regret_2.csv").is_file()
    assert (out / "runlog_2.npz").is_file()
    assert main(["verify", "--run", str(out), "--quiet"]) == 0
    result = json.loads((out / "verify.json").read_text())
    names = {r["name"] for r in result["reports"]}
    assert {"monotonicity", "sigma_bar_replay"} <= names


def test_cli_errors(tmp_path: Path) -> None:
    """
    Bad configurations and missing logs exit with 1.
    """
    config = _write_config(tmp_path / "config.json", T=0)
    assert main(["run", "--config", str(config), "--quiet"]) == 1
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["verify", "--run", str(empty), "--quiet"]) == 1


def test_env_spec_defaults() -> None:
    """
    The default instance is the reference linear instance shape.
    """
    env = EnvSpec()
    assert (env.kind, env.d, env.H, env.nX, env.nA) == ("linear", 3, 4, 6, 3)


def test_default_size_tabular_run(tmp_path: Path) -> None:
    """
    The default instance size runs on tabular classes with the default grid,
    whose member indices do not fit in 64 bits.
    """
    env = {"kind": "tabular", "H": 2, "nX": 6, "nA": 3, "seed": 0}
    config = _config(tmp_path, env=env, T=3)
    assert config.grid_step == 0.1
    records, _ = run_seed(config, build_instance(config.env), 0)
    assert [rec.episode for rec in records] == [1, 2, 3]


def test_check_setup_rejects_large_cover(tmp_path: Path) -> None:
    """
    Enumerating oracles over a cover too large to materialize are rejected
    before any file is written or episode run.
    """
    env = {"kind": "linear", "d": 3, "H": 2, "nX": 3, "nA": 2, "seed": 0}
    for oracle in ("vs", "subsample"):
        out = tmp_path / oracle
        config = _config(out, env=env, oracle=oracle, T=2000)
        with pytest.raises(ConfigError) as err:
            check_setup(config, build_instance(config.env))
        assert oracle in err.value.message
        with pytest.raises(ConfigError):
            run_experiment(config, verbose=False)
        assert not (out / "instance.json").exists()
    config = _config(tmp_path / "ok", env=env, oracle="elliptical", T=2000)
    check_setup(config, build_instance(config.env))


def test_subsample_summary_distinct(tmp_path: Path) -> None:
    """
    Subsampled runs report the distinct entries of their final episode in
    the summary.
    """
    config = _config(tmp_path / "out", oracle="subsample", seeds=[0, 1])
    summary = run_experiment(config, verbose=False)
    assert set(summary["distinct"]) == {"0", "1"}
    for seed in (0, 1):
        records, _ = run_seed(config, build_instance(config.env), seed)
        assert summary["distinct"][str(seed)] == records[-1].distinct
