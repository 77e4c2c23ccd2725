"""Outcome of a single mechanical check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str = ""
    data: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def passed(cls, **data) -> "Verdict":
        return cls(PASS, "", data)

    @classmethod
    def failed(cls, reason: str = "", **data) -> "Verdict":
        return cls(FAIL, reason, data)

    @classmethod
    def inapplicable(cls, reason: str, **data) -> "Verdict":
        return cls(INAPPLICABLE, reason, data)

    @property
    def ok(self) -> bool:
        """True unless the check found a counterexample."""
        return self.status != FAIL

    @property
    def applicable(self) -> bool:
        return self.status != INAPPLICABLE

    def __bool__(self):
        return self.ok
