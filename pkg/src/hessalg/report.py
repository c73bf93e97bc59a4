from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .numeric import as_number

PASS, FAIL, SKIPPED, VACUOUS = "pass", "fail", "skipped", "vacuous"
STATUSES = (PASS, FAIL, SKIPPED, VACUOUS)


@dataclass(frozen=True)
class CheckReport:
    """One named verification result.

    ``defect`` is the max absolute coefficient over the basis tuples that were
    evaluated (a Fraction on the exact path). ``witness`` holds 1-based basis
    indices of a tuple attaining it.
    """

    name: str
    status: str
    defect: object = 0
    witness: Optional[tuple] = None
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "defect": as_number(self.defect)}
        if self.witness is not None:
            out["witness"] = [int(i) for i in self.witness]
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, d: dict) -> "CheckReport":
        w = d.get("witness")
        return cls(d["name"], d["status"], d.get("defect", 0), tuple(w) if w is not None else None, d.get("note", ""))


def judged(name: str, defect, tol, witness=None, note: str = "") -> CheckReport:
    """Pass iff ``defect <= tol`` (``tol == 0`` means exact equality)."""
    ok = defect == 0 if tol == 0 else defect <= tol
    return CheckReport(name, PASS if ok else FAIL, defect, witness if not ok else None, note)


def worst(entries: Iterable[tuple]):
    """Max |value| and its index over (index_tuple, value) pairs."""
    best, where = 0, None
    for idx, v in entries:
        a = abs(v)
        if a > best:
            best, where = a, idx
    return best, where


@dataclass(frozen=True)
class ReportSet:
    """Ordered collection of reports with an aggregate status."""

    checks: tuple = field(default_factory=tuple)

    @property
    def any_failed(self) -> bool:
        return any(c.failed for c in self.checks)

    def __getitem__(self, name: str) -> CheckReport:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)
