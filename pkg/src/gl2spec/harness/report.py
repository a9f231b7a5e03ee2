"""Experiment configuration, execution, serialisation and table rendering."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..padic_core.arith import require_odd_prime
from . import grids

COMMANDS = ("orbits", "mass-check", "tree-check", "ratios", "weil", "dims", "fejer")

PARAMETER_KEYS = {
    "orbits": ("p", "chi", "omega", "conductor", "type", "parameters"),
    "mass-check": ("p", "chi", "omega", "r"),
    "tree-check": ("p", "r", "gamma_entries", "method"),
    "ratios": ("p", "A"),
    "weil": ("q", "weight", "degree", "coefficients"),
    "dims": ("k", "N"),
    "fejer": ("M", "mode", "z"),
}

PROVENANCE = {
    "orbits": "tempered-orbit-slices",
    "mass-check": "plancherel-mass-identity",
    "tree-check": "tree-constant-terms",
    "ratios": "small-rationality-mass-ratio",
    "weil": "weil-integer-enumeration",
    "dims": "cusp-dimension-main-term",
    "fejer": "fejer-transform-values",
}

R_CAPS = {"orbits": 4, "mass-check": 4, "tree-check": 6}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    primes: tuple[int, ...] = (3,)
    r_range: tuple[int, int] = (0, 2)
    A: int = 1
    output_format: str = "csv"
    output_path: Optional[Path] = None
    chi: str = "trivial"
    jobs: int = 1
    weight: int = 1
    max_degree: int = 2
    weights_k: tuple[int, ...] = (12,)
    n_max: int = 50
    fejer_M: tuple[int, ...] = (4, 8)
    fejer_z: tuple[Fraction, ...] = (Fraction(0), Fraction(1, 3))

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        try:
            for p in self.primes:
                require_odd_prime(p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        lo, hi = self.r_range
        cap = R_CAPS.get(self.command)
        if lo < 0 or hi < lo or (cap is not None and hi > cap):
            raise ConfigError(f"r range {self.r_range} outside 0..{cap}")
        if self.A < 1 or self.jobs < 1 or self.n_max < 1:
            raise ConfigError("A, jobs and n-max must be positive")


@dataclass
class ExperimentReport:
    command: str
    rows: list[dict]
    keys: tuple[str, ...] = ()
    provenance: dict = field(default_factory=dict)

    @property
    def pass_count(self) -> int:
        return sum(1 for r in self.rows if r["pass"])

    @property
    def fail_count(self) -> int:
        return len(self.rows) - self.pass_count


def _tasks(cfg: ExperimentConfig) -> list[tuple]:
    lo, hi = cfg.r_range
    if cfg.command == "orbits":
        return [(grids.orbit_rows, p, cfg.chi, hi) for p in cfg.primes]
    if cfg.command == "mass-check":
        return [(grids.mass_rows, p, cfg.chi, lo, hi) for p in cfg.primes]
    if cfg.command == "tree-check":
        return [(grids.tree_rows, p, lo, hi) for p in cfg.primes]
    if cfg.command == "ratios":
        return [(grids.ratio_rows, list(cfg.primes), cfg.A)]
    if cfg.command == "weil":
        return [(grids.weil_rows, q, cfg.weight, cfg.max_degree) for q in cfg.primes]
    if cfg.command == "dims":
        return [(grids.dim_rows, k, cfg.n_max) for k in cfg.weights_k]
    return [(grids.fejer_rows, list(cfg.fejer_M), list(cfg.fejer_z))]


def _call(task: tuple) -> list[dict]:
    fn, *args = task
    return fn(*args)


def sort_rows(rows: list[dict], keys: tuple[str, ...]) -> list[dict]:
    return sorted(rows, key=lambda r: tuple(r[k] for k in keys))


def run(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    tasks = _tasks(cfg)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_call, tasks))
    else:
        chunks = [_call(t) for t in tasks]
    keys = PARAMETER_KEYS[cfg.command]
    rows = sort_rows([row for chunk in chunks for row in chunk], keys)
    tag = PROVENANCE[cfg.command]
    for row in rows:
        row["provenance"] = tag
    report = ExperimentReport(cfg.command, rows, keys, {i: tag for i in range(len(rows))})
    if cfg.output_path is not None:
        write_atomic(Path(cfg.output_path), serialize(report, cfg.output_format))
    return report


def _columns(rows: list[dict]) -> list[str]:
    cols: list[str] = []
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    return cols


def serialize(report: ExperimentReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.rows, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_columns(report.rows), lineterminator="\r\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in row.items()})
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_table(report: ExperimentReport) -> str:
    if not report.rows:
        raise ValueError("nothing to render")
    rows = sort_rows(report.rows, report.keys) if report.keys else report.rows
    cols = [c for c in _columns(rows) if c != "provenance"]
    cells = [[str(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    lines.append(f"{report.pass_count} passed, {report.fail_count} failed")
    return "\n".join(lines) + "\n"
