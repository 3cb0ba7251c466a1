"""Pass/fail reports with witnesses, shared by every verifier."""
from __future__ import annotations

from dataclasses import dataclass, field

MAX_SHOWN = 10


@dataclass
class Check:
    name: str
    passed: bool
    witnesses: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witnesses": list(self.witnesses), **self.details}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, witnesses: list[str], **details) -> Check:
        """Record a check that passes iff it has no witnesses."""
        c = Check(name, not witnesses, list(witnesses), details)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witnesses, c.details))

    def witnesses(self) -> list[str]:
        return [w for c in self.checks for w in c.witnesses]

    def lines(self) -> list[str]:
        out = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            out.append(f"  [{c.status}] {c.name}")
            for w in c.witnesses[:MAX_SHOWN]:
                out.append(f"      {w}")
            if len(c.witnesses) > MAX_SHOWN:
                out.append(f"      ... {len(c.witnesses) - MAX_SHOWN} more")
        return out

    def __str__(self):
        return "\n".join(self.lines())
