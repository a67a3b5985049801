"""Report values: validation reports, law-check results, isomorphism evidence.

Every exhaustive check in the package reports findings as plain data.  A
violated equation is a `Violation` with the witnessing tuple; a suite of
equations is a `LawReport` of pass/fail/skip entries, each tagged with a
stable `anchor` naming the law family it verifies (documented in README).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
SKIP = "skipped"


@dataclass
class Violation:
    law: str
    witness: dict[str, Any]

    def to_doc(self) -> dict:
        return {"law": self.law, "witness": self.witness}


@dataclass
class ValidationReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, **witness: Any) -> None:
        self.violations.append(Violation(law, witness))

    def to_doc(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [v.to_doc() for v in self.violations],
        }


@dataclass
class LawCheck:
    check_id: str
    anchor: str
    status: str
    witness: Optional[dict] = None

    def to_doc(self) -> dict:
        doc: dict[str, Any] = {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
        }
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


@dataclass
class LawReport:
    checks: list[LawCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def passed(self, check_id: str, anchor: str) -> None:
        self.checks.append(LawCheck(check_id, anchor, PASS))

    def failed(self, check_id: str, anchor: str, witness: dict) -> None:
        self.checks.append(LawCheck(check_id, anchor, FAIL, witness))

    def skipped(self, check_id: str, anchor: str, reason: str) -> None:
        self.checks.append(LawCheck(check_id, anchor, SKIP, {"reason": reason}))

    def extend(self, other: "LawReport") -> None:
        self.checks.extend(other.checks)

    def to_doc(self) -> list[dict]:
        return [c.to_doc() for c in self.checks]


@dataclass
class IsoReport:
    """Evidence that two finite sets are in verified bijection.

    `left_size`/`right_size` are the cardinalities; `mismatches` lists any
    element whose round trip failed.  An empty mismatch list with equal
    sizes certifies the bijection element-wise.
    """

    name: str
    left_size: int
    right_size: int
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.left_size == self.right_size and not self.mismatches

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "left_size": self.left_size,
            "right_size": self.right_size,
            "ok": self.ok,
            "mismatches": self.mismatches,
        }
