"""Experiment reports and their JSON / CSV serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):  # numpy scalar
        return _clean(v.item())
    return v


@dataclass
class ExperimentReport:
    """Outcome of one experiment: a pure function of name, parameters and seed."""

    name: str
    prime: int
    samples: int
    seed: int
    parameters: dict = field(default_factory=dict)
    statistics: dict = field(default_factory=dict)
    criteria: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.criteria.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p": int(self.prime),
            "samples": int(self.samples),
            "seed": int(self.seed),
            "parameters": {k: _clean(v) for k, v in self.parameters.items()},
            "statistics": {k: _clean(float(v)) for k, v in self.statistics.items()},
            "criteria": {k: bool(v) for k, v in self.criteria.items()},
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self, table: str | None = None) -> str:
        if table is None:
            if not self.tables:
                return ""
            table = next(iter(self.tables))
        return rows_to_csv(self.tables[table])


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v
