"""Audit trail for the iterative algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import Inequality


@dataclass
class TraceStep:
    action: str
    data: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"action": self.action, **self.data, "checks": [c.to_json() for c in self.checks]}


@dataclass
class ExtractionTrace:
    steps: list = field(default_factory=list)

    def add(self, action: str, checks=(), **data) -> TraceStep:
        step = TraceStep(action, data, list(checks))
        self.steps.append(step)
        return step

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def inequalities(self) -> list[Inequality]:
        return [c for s in self.steps for c in s.checks]

    def all_hold(self) -> bool:
        return all(c.holds for c in self.inequalities())

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]
