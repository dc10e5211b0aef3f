"""Result record shared by the numeric verification routines."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    # observed to hold but not a theorem; never a hard failure
    CONJECTURE = "CONJECTURE"


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    status: Status | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is None:
            self.status = Status.PASS if not self.violations else Status.FAIL

    @property
    def passed(self) -> bool:
        return not self.violations

    def finalize(self, conjecture: bool = False) -> "CheckReport":
        self.violations.sort(key=lambda v: v if not isinstance(v, tuple) else v[0])
        if conjecture:
            self.status = Status.CONJECTURE
        else:
            self.status = Status.PASS if not self.violations else Status.FAIL
        return self

    def summary(self) -> str:
        return f"{self.name}: {self.status.value} ({self.checked} checked, {len(self.violations)} violations)"
