"""Machine-readable outcome records for identity checks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Dict

from .exactalg import RingElem

PASS = "pass"
FAIL = "fail"
DEGENERATE = "degenerate"
SKIPPED = "skipped"

RESIDUAL_TERM_CAP = 50


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one identity check.

    ``status`` is ``pass`` iff the residual is the exact zero ring element;
    the serialized residual is truncated to `RESIDUAL_TERM_CAP` terms on
    failure so reports stay bounded.
    """

    suite: str
    params: Dict[str, Any]
    status: str
    residual: str = "0"
    wall_time_ms: int = 0
    instance_hash: str = ""

    @staticmethod
    def from_residual(suite: str, params: Dict[str, Any], residual: RingElem,
                      instance_hash: str = "", wall_time_ms: int = 0) -> "VerificationReport":
        if residual.is_zero:
            return VerificationReport(suite, params, PASS, "0", wall_time_ms, instance_hash)
        return VerificationReport(suite, params, FAIL,
                                  residual.to_text(max_terms=RESIDUAL_TERM_CAP),
                                  wall_time_ms, instance_hash)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIPPED, DEGENERATE)

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "suite": self.suite,
            "params": self.params,
            "status": self.status,
            "residual": self.residual,
            "instance_hash": self.instance_hash,
        }
        if with_timing:
            d["wall_time_ms"] = self.wall_time_ms
        return d

    def sort_key(self) -> tuple:
        return (self.suite, json.dumps(self.params, sort_keys=True, default=str))
