"""Check records shared by every verification suite."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    residual: Optional[str] = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        out = {"suite": self.suite, "name": self.name, "status": self.status}
        if self.residual is not None:
            out["residual"] = self.residual
        return out


@dataclass
class SuiteReport:
    suite: str
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, residual=None) -> Check:
        if residual is not None and not isinstance(residual, str):
            residual = str(residual)
        chk = Check(self.suite, name, bool(passed), None if passed else residual)
        self.checks.append(chk)
        return chk

    def expect_zero(self, name: str, value) -> Check:
        """Record a check that ``value`` is exactly zero (anything with is_zero())."""
        return self.add(name, value.is_zero(), value)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def extend(self, other: "SuiteReport") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    def __repr__(self):
        bad = len(self.failures)
        return f"<SuiteReport {self.suite}: {len(self.checks)} checks, {bad} failed>"
