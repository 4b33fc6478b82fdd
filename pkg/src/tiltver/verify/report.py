"""Verification reports with deterministic JSON."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import numpy as np

STATUSES = ("pass", "fail", "inconclusive", "out-of-budget")


@dataclass
class VerificationReport:
    claim: str
    params: dict[str, Any]
    status: str = "pass"
    witnesses: dict[str, Any] = field(default_factory=dict)
    timing_ms: int | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, note: str) -> None:
        self.status = "fail"
        self.notes.append(note)

    def downgrade(self, status: str, note: str) -> None:
        """Lower the status to ``status`` unless it is already a failure."""
        if self.status != "fail":
            self.status = status
        self.notes.append(note)

    def to_json(self) -> dict:
        w = dict(self.witnesses)
        if self.notes:
            w["notes"] = list(self.notes)
        return {
            "claim": self.claim,
            "params": self.params,
            "status": self.status,
            "witnesses": w,
            "timing_ms": self.timing_ms,
        }

    def dumps(self) -> str:
        return canonical_json(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "VerificationReport":
        w = dict(data["witnesses"])
        notes = w.pop("notes", [])
        return cls(data["claim"], data["params"], data["status"], w, data.get("timing_ms"), notes)


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=_plain)


def stable_json(obj) -> str:
    """Compact JSON keeping insertion order (used where key order carries meaning)."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, default=_plain)


@contextmanager
def timed(report: VerificationReport, enabled: bool):
    """Fill ``timing_ms`` when enabled; left null otherwise so reports stay reproducible."""
    t0 = time.perf_counter()
    yield
    if enabled:
        report.timing_ms = int(round((time.perf_counter() - t0) * 1000))
