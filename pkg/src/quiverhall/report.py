"""Machine-readable verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    status: str
    lhs: str
    rhs: str


@dataclass
class Report:
    suite: str
    q: int
    quiver: dict
    seed: int
    checks: list = field(default_factory=list)

    def add(self, name: str, status: str, lhs: str, rhs: str) -> None:
        self.checks.append(Check(name, status, lhs, rhs))

    def add_all(self, rows) -> None:
        for name, status, lhs, rhs in rows:
            self.add(name, status, lhs, rhs)

    def all_pass(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_json(self) -> str:
        obj = {
            "suite": self.suite,
            "q": self.q,
            "quiver": self.quiver,
            "seed": self.seed,
            "checks": [{"name": c.name, "status": c.status, "lhs": c.lhs, "rhs": c.rhs}
                       for c in self.checks],
        }
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
