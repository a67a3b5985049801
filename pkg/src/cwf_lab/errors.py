"""Exception types shared across the package.

Law violations are *data* (see report.py); exceptions are reserved for
malformed requests: unknown identifiers, mismatched endpoints, exceeded
budgets, and documents that fail validation on load.
"""

from __future__ import annotations


class CwfLabError(Exception):
    """Base class for all package errors."""


class StructuralError(CwfLabError):
    """Shape problem: unknown id, endpoint mismatch, missing table entry."""


class CapacityError(CwfLabError):
    """A configured budget (fuel, fiber budget, bounds) was exceeded."""


class InvalidStructureError(CwfLabError):
    """A checked constructor received data that violates its laws.

    Carries the full validation report so callers can surface witnesses.
    """

    def __init__(self, report):
        self.report = report
        lines = [f"{v.law}: {v.witness}" for v in report.violations[:5]]
        more = len(report.violations) - 5
        if more > 0:
            lines.append(f"... and {more} more")
        super().__init__(f"invalid {report.subject}: " + "; ".join(lines))
