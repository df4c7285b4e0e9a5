"""Perception verdicts shared by oracles, planners, and the session memory."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

NOT_RECOGNIZABLE = "not_recognizable"
RECOGNIZABLE = "recognizable"
CLEAR = "clear"
COMPARISON = "comparison"
ANSWER = "answer"

# ordering used when picking the "best so far" record from memory
_RANK = {ANSWER: 0, COMPARISON: 0, NOT_RECOGNIZABLE: 1, RECOGNIZABLE: 2, CLEAR: 3}

FIRST = "first"
SECOND = "second"


@dataclass(frozen=True)
class Comparison:
    """Outcome of a pairwise image comparison.

    ``too_low`` marks that a too-faint disqualification decided (or affected)
    the comparison rather than pure overplotting quality.
    """

    winner: str  # "first" | "second"
    too_low: bool = False


@dataclass(frozen=True)
class Assessment:
    kind: str
    comparison: Optional[Comparison] = None
    answer: Optional[str] = None
    confidence: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _RANK:
            raise ValueError(f"unknown assessment kind {self.kind!r}")
        if (self.kind == COMPARISON) != (self.comparison is not None):
            raise ValueError("comparison payload must accompany exactly the comparison kind")
        if (self.kind == ANSWER) != (self.answer is not None):
            raise ValueError("answer payload must accompany exactly the answer kind")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")

    @classmethod
    def not_recognizable(cls, confidence=None) -> "Assessment":
        return cls(kind=NOT_RECOGNIZABLE, confidence=confidence)

    @classmethod
    def recognizable(cls, confidence=None) -> "Assessment":
        return cls(kind=RECOGNIZABLE, confidence=confidence)

    @classmethod
    def clear(cls, confidence=None) -> "Assessment":
        return cls(kind=CLEAR, confidence=confidence)

    @classmethod
    def compare(cls, winner: str, too_low: bool = False) -> "Assessment":
        return cls(kind=COMPARISON, comparison=Comparison(winner=winner, too_low=too_low))

    @classmethod
    def answer_text(cls, text: str) -> "Assessment":
        return cls(kind=ANSWER, answer=text)

    @property
    def rank(self) -> int:
        return _RANK[self.kind]

    def is_volume_verdict(self) -> bool:
        return self.kind in (NOT_RECOGNIZABLE, RECOGNIZABLE, CLEAR)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.comparison is not None:
            d["winner"] = self.comparison.winner
            d["too_low"] = self.comparison.too_low
        if self.answer is not None:
            d["answer"] = self.answer
        if self.confidence is not None:
            d["confidence"] = self.confidence
        return d

    @classmethod
    def from_dict(cls, d) -> "Assessment":
        kind = d["kind"]
        comparison = None
        if kind == COMPARISON:
            comparison = Comparison(winner=d["winner"], too_low=bool(d.get("too_low", False)))
        return cls(
            kind=kind,
            comparison=comparison,
            answer=d.get("answer"),
            confidence=d.get("confidence"),
        )


def label_to_assessment(label: str) -> Assessment:
    """Map a free-text assessment label from an agent response to a verdict."""
    norm = label.strip().lower().replace("-", " ").replace("_", " ")
    if "not recognizable" in norm or norm == "not":
        return Assessment.not_recognizable()
    if "recognizable" in norm:
        return Assessment.recognizable()
    if "clear" in norm:
        return Assessment.clear()
    return Assessment.answer_text(label.strip())
