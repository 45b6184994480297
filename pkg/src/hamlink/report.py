"""Verification reports and construction certificates.

Verifiers return a clause-by-clause report instead of raising; constructors
that cannot meet their contract raise :class:`ConstructionError` carrying a
machine-readable certificate (stage, reason, witness).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class ClauseCheck:
    clause: str
    ok: bool
    detail: str = ""
    witness: Any = None

    def to_json(self) -> dict:
        d: dict[str, Any] = {"clause": self.clause, "ok": self.ok}
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerificationReport:
    subject: str
    checks: list[ClauseCheck] = field(default_factory=list)

    def add(self, clause: str, ok: bool, detail: str = "", witness: Any = None) -> bool:
        self.checks.append(ClauseCheck(clause, bool(ok), detail, witness))
        return bool(ok)

    def extend(self, sub: "VerificationReport", prefix: str) -> None:
        for c in sub.checks:
            self.checks.append(ClauseCheck(f"{prefix}.{c.clause}", c.ok, c.detail, c.witness))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[ClauseCheck]:
        return [c for c in self.checks if not c.ok]

    def first_failure(self) -> ClauseCheck | None:
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }

    def summary(self) -> str:
        bad = self.failures()
        if not bad:
            return f"{self.subject}: pass ({len(self.checks)} checks)"
        head = ", ".join(c.clause for c in bad[:4])
        return f"{self.subject}: FAIL [{head}]"


@dataclass
class Certificate:
    stage: str
    reason: str
    witness: Any = None

    def to_json(self) -> dict:
        d: dict[str, Any] = {"stage": self.stage, "reason": self.reason}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


class ConstructionError(Exception):
    """A construction stage could not meet its contract."""

    def __init__(self, stage: str, reason: str, witness: Any = None, partial: Any = None):
        super().__init__(f"[{stage}] {reason}")
        self.certificate = Certificate(stage, reason, witness)
        self.partial = partial
