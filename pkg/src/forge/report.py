"""Report documents (JSON) and partial-length tables (CSV)."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

SCHEMA_VERSION = "1.0"
CSV_COLUMNS = ("ray_angle", "epsilon", "partial_length")


def to_jsonable(x):
    """Recursively map numpy scalars/arrays, tuples and non-finite floats to JSON types."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, complex):
        return {"re": to_jsonable(x.real), "im": to_jsonable(x.imag)}
    if x is None or isinstance(x, str):
        return x
    return str(x)


@dataclass
class ReportDocument:
    scenario: dict
    ends: list = field(default_factory=list)          # EndReport.as_dict()
    consistency: list = field(default_factory=list)
    inequality_suites: dict = field(default_factory=dict)
    singular_curves: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    exit_code: int = 0
    tables: dict = field(default_factory=dict)  # evidence rows, also written as CSV

    def as_dict(self):
        return to_jsonable({
            "schema_version": SCHEMA_VERSION, "tool": "forge", "tool_version": __version__,
            "scenario": self.scenario, "ends": self.ends, "consistency": self.consistency,
            "inequality_suites": self.inequality_suites, "singular_curves": self.singular_curves,
            "tolerances": self.tolerances, "errors": self.errors, "timing": self.timing,
            "exit_code": self.exit_code,
            "tables": {k: [list(r) for r in v] for k, v in self.tables.items()},
        })

    def verdicts(self):
        """Just the fields that must be bit-identical across reruns."""
        keys = ("end_id", "kind", "weakly_complete", "complete", "singular_set_compact",
                "end_punctured_type", "weak_growth", "strong_growth", "pole_orders", "exempt",
                "inconclusive")
        out = []
        for e in to_jsonable(self.ends):
            row = {k: e[k] for k in keys}
            row["pole_orders"] = {k: v["verdict"] for k, v in e["pole_orders"].items()}
            out.append(row)
        return out

    def to_json(self, indent=2):
        return json.dumps(self.as_dict(), indent=indent, sort_keys=True)


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for a, e, L in rows:
            w.writerow([repr(float(a)), repr(float(e)), repr(float(L))])


def read_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = tuple(next(r))
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        return [tuple(float(v) for v in row) for row in r]


def write_outputs(doc: ReportDocument, outdir) -> list:
    """``<name>.report.json`` plus one ``<name>.<metric>.csv`` per table; returns the paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    name = doc.scenario.get("name", "scenario")
    paths = [out / f"{name}.report.json"]
    paths[0].write_text(doc.to_json() + "\n")
    for metric, rows in sorted(doc.tables.items()):
        p = out / f"{name}.{_slug(metric)}.csv"
        write_csv(p, rows)
        paths.append(p)
    return paths


def _slug(s):
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in s)


class Timer:
    def __init__(self):
        self.t = {}

    def __call__(self, label):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.t[label] = time.perf_counter() - self.t0

        return _Ctx()
