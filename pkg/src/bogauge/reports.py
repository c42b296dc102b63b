"""Experiment reports: verdicts, JSON persistence, CSV export.

Reports serialize to JSON with Python's shortest round-trip float
representation, so every scalar reloads bit-identically.  Each verdict
names the threshold it was judged against, making the pass/fail flags
recomputable from the stored values alone.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Dict, List

import numpy as np


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def verdict(value: float, threshold_name: str, threshold, op: str = "<=") -> dict:
    """Judge ``value`` against a named threshold.

    ``op`` is one of ``"<="``, ``">="``, or ``"range"`` (threshold is then
    a ``[lo, hi]`` pair).
    """
    value = float(value)
    if op == "<=":
        ok = value <= threshold
    elif op == ">=":
        ok = value >= threshold
    elif op == "range":
        lo, hi = threshold
        ok = lo <= value <= hi
    else:
        raise ValueError(f"unknown verdict op {op!r}")
    return {
        "pass": bool(ok),
        "value": value,
        "threshold_name": threshold_name,
        "threshold": _jsonable(threshold),
        "op": op,
    }


@dataclass
class ExperimentReport:
    """Config echo, scalar results, named series, and per-criterion verdicts."""

    config: dict
    results: Dict[str, object] = dataclass_field(default_factory=dict)
    series: Dict[str, List[float]] = dataclass_field(default_factory=dict)
    verdicts: Dict[str, dict] = dataclass_field(default_factory=dict)
    meta: Dict[str, object] = dataclass_field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(v["pass"] for v in self.verdicts.values())

    def add_series(self, name: str, values):
        self.series[name] = [float(v) for v in np.asarray(values).ravel()]

    def to_dict(self) -> dict:
        return {
            "config": _jsonable(self.config),
            "results": _jsonable(self.results),
            "series": _jsonable(self.series),
            "verdicts": _jsonable(self.verdicts),
            "meta": _jsonable(self.meta),
        }

    def stamp(self, wall_seconds: float):
        from . import __version__

        self.meta.update({
            "package_version": __version__,
            "numpy_version": np.__version__,
            "created_unix": time.time(),
            "wall_seconds": wall_seconds,
        })

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        return path

    def write_csv(self, names: List[str], base_path) -> List[Path]:
        """Export named series as ``t,<name>`` CSV files next to the report."""
        base = Path(base_path)
        t = self.series.get("t")
        written = []
        for name in names:
            if name == "t":
                continue
            if name not in self.series:
                raise KeyError(f"no series named {name!r} in report")
            ys = self.series[name]
            xs = t if t is not None and len(t) == len(ys) else list(range(len(ys)))
            out = base.with_name(base.stem + f".{name}.csv")
            lines = [f"t,{name}"] + [f"{x!r},{y!r}" for x, y in zip(xs, ys)]
            out.write_text("\n".join(lines) + "\n")
            written.append(out)
        return written


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())
