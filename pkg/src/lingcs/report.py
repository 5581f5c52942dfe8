"""Check records shared by every verification routine."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional


@dataclass
class Check:
    check_id: str
    paper_anchor: str
    status: str  # "pass", "fail" or "skipped"
    witness: Optional[str] = None
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass
class Report:
    title: str = ""
    records: List[Check] = field(default_factory=list)

    def add(self, check_id: str, anchor: str, ok: bool, witness=None, wall_time: float = 0.0) -> Check:
        rec = Check(check_id, anchor, "pass" if ok else "fail", None if ok else _fmt(witness), wall_time)
        self.records.append(rec)
        return rec

    def skip(self, check_id: str, anchor: str, reason: str = "") -> Check:
        rec = Check(check_id, anchor, "skipped", reason or None)
        self.records.append(rec)
        return rec

    def run(self, check_id: str, anchor: str, fn: Callable[[], Optional[object]]) -> Check:
        """Run ``fn``; it returns None on success or a witness on failure."""
        t0 = time.perf_counter()
        w = fn()
        return self.add(check_id, anchor, w is None, w, time.perf_counter() - t0)

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for r in other.records:
            self.records.append(Check(prefix + r.check_id, r.paper_anchor, r.status, r.witness, r.wall_time))
        return self

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    @property
    def failures(self) -> List[Check]:
        return [r for r in self.records if r.status == "fail"]

    @property
    def skipped(self) -> List[Check]:
        return [r for r in self.records if r.status == "skipped"]

    def by_id(self, check_id: str) -> Check:
        for r in self.records:
            if r.check_id == check_id:
                return r
        raise KeyError(check_id)


def _fmt(w) -> Optional[str]:
    if w is None:
        return "(no witness)"
    if isinstance(w, str):
        return w
    return repr(w)
