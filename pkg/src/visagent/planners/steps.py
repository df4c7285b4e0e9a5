"""Planner step outcomes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..params import ParamVector

NEXT = "next"
DONE = "done"
FAILED = "failed"


@dataclass(frozen=True)
class PlannerStep:
    variant: str
    params: Optional[ParamVector] = None
    reason: str = ""
    plan: str = ""

    def __post_init__(self):
        if self.variant not in (NEXT, DONE, FAILED):
            raise ValueError(f"unknown planner step variant {self.variant!r}")
        if self.variant in (NEXT, DONE) and self.params is None:
            raise ValueError(f"{self.variant} step needs params")

    @classmethod
    def next(cls, params: ParamVector, plan: str = "") -> "PlannerStep":
        return cls(variant=NEXT, params=params, plan=plan)

    @classmethod
    def done(cls, params: ParamVector, plan: str = "") -> "PlannerStep":
        return cls(variant=DONE, params=params, plan=plan)

    @classmethod
    def failed(cls, reason: str) -> "PlannerStep":
        return cls(variant=FAILED, reason=reason)

    @property
    def is_next(self) -> bool:
        return self.variant == NEXT

    @property
    def is_done(self) -> bool:
        return self.variant == DONE

    @property
    def is_failed(self) -> bool:
        return self.variant == FAILED
