"""On-disk formats: CSV series, JSON analysis/manifest, config hash, lock.

Numbers are serialized with ``repr`` (shortest round-trip form), so every
value written to disk re-parses to the identical float.  Files use UTF-8
and LF line endings regardless of platform.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from .ensemble import EntropySeries, SchmidtSeries


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_series_csv(path: Path, series: EntropySeries, per_realization: bool = False):
    """``t,mean,stderr`` columns, optionally one ``r{index}`` per realization."""
    header = ["t", "mean", "stderr"]
    columns = [series.times, series.mean, series.stderr]
    if per_realization:
        for pos, idx in enumerate(series.realization_indices):
            header.append(f"r{idx}")
            columns.append(series.values[pos])
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(x) for x in row))
    _write_text(Path(path), "\n".join(lines) + "\n")


def read_series_csv(path: Path) -> Dict[str, np.ndarray]:
    """Columns of a series CSV, keyed by header name."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array(rows, dtype=float)
    return {name: data[:, k] for k, name in enumerate(header)}


def write_schmidt_typical_csv(path: Path, times: np.ndarray, typical_log: np.ndarray):
    """Typical Schmidt values, ``t,lambda_1..lambda_K``."""
    k = typical_log.shape[1]
    header = ["t"] + [f"lambda_{i}" for i in range(1, k + 1)]
    lines = [",".join(header)]
    with np.errstate(under="ignore"):
        lam = np.exp(typical_log)
    for t, row in zip(times, lam):
        lines.append(",".join([_fmt(t)] + [_fmt(x) for x in row]))
    _write_text(Path(path), "\n".join(lines) + "\n")


def write_schmidt_realization_csv(path: Path, times: np.ndarray, log_values: np.ndarray):
    """One realization's ``ln Lambda_i`` curves; log domain survives underflow."""
    k = log_values.shape[1]
    header = ["t"] + [f"log_lambda_{i}" for i in range(1, k + 1)]
    lines = [",".join(header)]
    for t, row in zip(times, log_values):
        lines.append(",".join([_fmt(t)] + [_fmt(x) for x in row]))
    _write_text(Path(path), "\n".join(lines) + "\n")


def write_schmidt_series(dirpath: Path, L: int, series: SchmidtSeries):
    dirpath = Path(dirpath)
    write_schmidt_typical_csv(dirpath / f"typical_L{L}.csv", series.times, series.typical_log)
    for pos, idx in enumerate(series.realization_indices):
        write_schmidt_realization_csv(
            dirpath / "realizations" / f"L{L}_r{idx}.csv",
            series.times,
            series.log_values[pos],
        )


def read_schmidt_typical_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    data = read_series_csv(path)  # same layout: named columns
    times = data["t"]
    k = len(data) - 1
    lam = np.stack([data[f"lambda_{i}"] for i in range(1, k + 1)], axis=1)
    return times, lam


def write_json(path: Path, payload: dict):
    _write_text(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def config_hash(physics_fields: dict) -> str:
    """Hash over the physics-affecting configuration subset."""
    canonical = json.dumps(physics_fields, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class RunLock:
    """One concurrent run per output directory, enforced by a lock file."""

    def __init__(self, directory: Path):
        self.path = Path(directory) / ".lock"

    def __enter__(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise RuntimeError(
                f"output directory is locked by another run: {self.path}"
            ) from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        return self

    def __exit__(self, *exc):
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass
        return False
