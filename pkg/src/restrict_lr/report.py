"""Pass/fail reports with machine-checkable witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    identity: str
    passed: bool
    samples: int = 1
    witness: dict | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"identity": self.identity, "passed": self.passed, "samples": self.samples}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    subject: str
    checks: list[Check] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "notes": self.notes,
        }

    def summary(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.identity} ({c.samples} sample{'s' if c.samples != 1 else ''})")
            if not c.passed and c.witness:
                for k, v in c.witness.items():
                    lines.append(f"      {k}: {v}")
        for k, v in self.notes.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)
