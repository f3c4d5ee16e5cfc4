"""
run_log.py
==========

Module containing the RunLog class, per-episode snapshots of a run that the
verify subpackage audits offline.

Per-visit quantities (shape (T, H)) are always kept. Value tables and bonus
tables (shape (T, H, nX, nA)) are kept when `keep_tables` is set.
"""

from pathlib import Path
from typing import Any

import numpy as np

RUN_LOG_FORMAT = "voql-run-log"
RUN_LOG_VERSION = 1

VISIT_KEYS = (
    "x",
    "a",
    "r",
    "x_next",
    "sigma",
    "sigma_bar",
    "d_unit",
    "d_weighted",
    "f2_z",
    "fm2_z",
    "completeness",
)
TABLE_KEYS = (
    "f1",
    "f2",
    "fm2",
    "fhat_m2",
    "ghat",
    "b1",
    "b2",
    "b1_raw",
    "b2_raw",
)
EPISODE_KEYS = (
    "u",
    "h_t",
    "beta1",
    "beta2",
    "beta_bar",
    "iota",
    "upsilon",
    "raw_violations",
)
META_KEYS = ("alpha", "lam", "L", "eps", "c_scale", "H", "T")


class RunLog:
    """
    Growing record of a run.

    Attributes
    ----------
    meta : dict[str, float]
        Run constants (alpha, lam, L, eps, c_scale, H, T)
    keep_tables : bool
        Whether value and bonus tables are recorded
    """

    meta: dict[str, float]
    keep_tables: bool
    _rows: dict[str, list[Any]]

    def __init__(
        self, meta: dict[str, float], keep_tables: bool = True
    ) -> None:
        missing = [k for k in META_KEYS if k not in meta]
        if missing:
            raise ValueError(f"run log metadata lacks {missing}")
        self.meta = {k: float(v) for k, v in meta.items()}
        self.keep_tables = keep_tables
        keys = VISIT_KEYS + EPISODE_KEYS
        if keep_tables:
            keys = keys + TABLE_KEYS
        self._rows = {k: [] for k in keys}

    def __len__(self) -> int:
        return len(self._rows["u"])

    def append(self, episode: dict[str, Any]) -> None:
        """
        Append the snapshot of one episode; table keys are ignored unless
        `keep_tables` is set.
        """
        for key, rows in self._rows.items():
            if key not in episode:
                raise KeyError(f"episode snapshot lacks '{key}'")
            rows.append(np.array(episode[key], copy=True))

    def has(self, key: str) -> bool:
        """True if the log records `key`."""
        return key in self._rows

    def __getitem__(self, key: str) -> np.ndarray:
        """Stacked array of `key` over the recorded episodes."""
        if key not in self._rows:
            raise KeyError(f"run log does not record '{key}'")
        return np.array(self._rows[key])

    @property
    def episodes(self) -> int:
        """Number of recorded episodes."""
        return len(self)

    # FILE IO ################################################################

    def save(self, filename: str | Path) -> None:
        """
        Write the log to a compressed .npz file.
        """
        arrays = {k: self[k] for k in self._rows}
        arrays["meta_keys"] = np.array(list(self.meta.keys()))
        arrays["meta_values"] = np.array(list(self.meta.values()))
        arrays["format"] = np.array(RUN_LOG_FORMAT)
        arrays["version"] = np.array(RUN_LOG_VERSION)
        np.savez_compressed(filename, **arrays)

    @classmethod
    def load(cls, filename: str | Path) -> "RunLog":
        """
        Read a log written by `save`.
        """
        with np.load(filename) as data:
            if str(data["format"]) != RUN_LOG_FORMAT:
                raise ValueError(f"{filename} is not a run log")
            if int(data["version"]) != RUN_LOG_VERSION:
                raise ValueError(f"unsupported run log version in {filename}")
            meta = dict(
                zip(
                    [str(k) for k in data["meta_keys"]],
                    [float(v) for v in data["meta_values"]],
                )
            )
            keep_tables = all(k in data.files for k in TABLE_KEYS)
            log = cls(meta, keep_tables)
            for key in log._rows:
                log._rows[key] = list(data[key])
        return log
