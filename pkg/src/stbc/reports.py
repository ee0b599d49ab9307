"""Tiny pass/fail report containers used by the certification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One named certification check with optional failure witnesses."""

    name: str
    passed: bool
    witnesses: list[str] = field(default_factory=list)
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"[{status}] {self.name}"
        if self.detail:
            out += f" ({self.detail})"
        for w in self.witnesses[:8]:
            out += f"\n       witness: {w}"
        extra = len(self.witnesses) - 8
        if extra > 0:
            out += f"\n       ... {extra} more witnesses"
        return out


@dataclass
class Report:
    """An ordered collection of checks."""

    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witnesses: list[str] | None = None,
            detail: str = "") -> Check:
        check = Check(name, bool(passed), list(witnesses or []), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    def summary(self) -> str:
        lines = [f"== {self.title}: {'PASS' if self.passed else 'FAIL'} =="]
        lines += [c.line() for c in self.checks]
        return "\n".join(lines)
