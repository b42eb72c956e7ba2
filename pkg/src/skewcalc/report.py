"""Verification reports: named checks with pass/fail/undetermined status."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from . import __version__

PASS, FAIL, UNDETERMINED = "pass", "fail", "undetermined"
SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    status: str
    details: str = ""
    assumptions: list = field(default_factory=list)

    @classmethod
    def of(cls, name: str, ok: bool, details: str = "", assumptions=()) -> "Check":
        return cls(name, PASS if ok else FAIL, details, list(assumptions))


@dataclass
class Report:
    algebra: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.details, list(c.assumptions)))
        self.data.update(other.data)

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if UNDETERMINED in states:
            return UNDETERMINED
        return PASS

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, UNDETERMINED: 3}[self.status]

    def to_dict(self, timestamp: str | None = None) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "tool": "skewcalc",
            "version": __version__,
            "algebra": self.algebra,
            "status": self.status,
            "checks": [asdict(c) for c in self.checks],
        }
        if self.data:
            out["data"] = self.data
        if timestamp is not None:
            out["timestamp"] = timestamp
        return out

    def to_json(self, timestamp: str | None = None) -> str:
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=True)

    def text(self) -> str:
        lines = [f"{self.algebra}: {self.status}"]
        for c in self.checks:
            extra = f" ({c.details})" if c.details else ""
            lines.append(f"  [{c.status}] {c.name}{extra}")
        return "\n".join(lines)
