"""Structured experiment results: named checks with values and thresholds."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """A single verdict: a measured value against a threshold."""

    name: str
    passed: bool
    value: float
    threshold: float | None = None
    detail: str = ""

    def to_dict(self):
        d = {"name": self.name, "passed": bool(self.passed), "value": float(self.value)}
        if self.threshold is not None:
            d["threshold"] = float(self.threshold)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    """Inputs echoed, computed quantities, and pass/fail verdicts."""

    name: str
    statement: str
    checks: list[Check] = field(default_factory=list)
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "name": self.name,
            "statement": self.statement,
            "passed": self.passed,
            "grid": self.grid,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def grid_echo(grid) -> dict:
    return {"K": grid.half_width, "N": grid.count, "dk": grid.dk}
