"""Verdict reports shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    verdict: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "verdict": bool(self.verdict), "detail": self.detail}


@dataclass
class Report:
    case: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, verdict: bool, detail: str = "") -> Check:
        c = Check(name, bool(verdict), detail)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.verdict for c in self.checks)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {"case": self.case, "checks": [c.as_dict() for c in self.checks]}
