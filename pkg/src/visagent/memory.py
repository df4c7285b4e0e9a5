"""Session memory: per-step records, JSON persistence, context selection.

A session persists as one JSON file plus a sibling ``images/`` directory of
content-addressed PNGs, so runs stay inspectable and diff-able.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .config import AgentConfig
from .errors import ConfigError
from .imaging import content_hash
from .params import ParamVector
from .perception.assessment import Assessment

STATUS_RUNNING = "running"
STATUS_PAUSED = "paused"
STATUS_DONE_SUCCESS = "done_success"
STATUS_DONE_BUDGET = "done_budget_exhausted"
STATUS_FAILED = "failed"
STATUSES = (STATUS_RUNNING, STATUS_PAUSED, STATUS_DONE_SUCCESS, STATUS_DONE_BUDGET, STATUS_FAILED)
_TERMINAL = (STATUS_DONE_SUCCESS, STATUS_DONE_BUDGET, STATUS_FAILED)


@dataclass(frozen=True)
class IterationRecord:
    step: int
    params: ParamVector
    image_ref: str
    reasoning: str
    plan: str
    assessment: Assessment
    wall_time_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "params": self.params.to_dict(),
            "image_ref": self.image_ref,
            "reasoning": self.reasoning,
            "plan": self.plan,
            "assessment": self.assessment.to_dict(),
            "wall_time_ms": self.wall_time_ms,
        }

    @classmethod
    def from_dict(cls, d) -> "IterationRecord":
        return cls(
            step=int(d["step"]),
            params=ParamVector.from_dict(d["params"]),
            image_ref=d["image_ref"],
            reasoning=d.get("reasoning", ""),
            plan=d.get("plan", ""),
            assessment=Assessment.from_dict(d["assessment"]),
            wall_time_ms=int(d.get("wall_time_ms", 0)),
        )


@dataclass
class Session:
    id: str
    goal: str
    config: AgentConfig
    records: list = field(default_factory=list)
    status: str = STATUS_RUNNING
    final_params: Optional[ParamVector] = None
    failure_reason: str = ""
    token_usage: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ConfigError(f"unknown session status {self.status!r}")

    def validate(self) -> None:
        for i, rec in enumerate(self.records):
            if rec.step != i:
                raise ConfigError(f"record steps must be consecutive from 0; record {i} has step {rec.step}")
        if self.status == STATUS_DONE_SUCCESS and self.final_params is None:
            raise ConfigError("done_success requires final_params")
        if len(self.records) > self.config.max_iterations:
            raise ConfigError("more records than max_iterations")

    @property
    def is_terminal(self) -> bool:
        return self.status in _TERMINAL

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "goal": self.goal,
            "config": self.config.to_dict(),
            "records": [r.to_dict() for r in self.records],
            "status": self.status,
            "final_params": self.final_params.to_dict() if self.final_params is not None else None,
        }
        if self.failure_reason:
            d["failure_reason"] = self.failure_reason
        if self.token_usage:
            d["token_usage"] = dict(self.token_usage)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "Session":
        fp = d.get("final_params")
        return cls(
            id=d["id"],
            goal=d["goal"],
            config=AgentConfig.from_dict(d["config"]),
            records=[IterationRecord.from_dict(r) for r in d.get("records", [])],
            status=d.get("status", STATUS_RUNNING),
            final_params=ParamVector.from_dict(fp) if fp is not None else None,
            failure_reason=d.get("failure_reason", ""),
            token_usage=dict(d.get("token_usage", {})),
        )


def select_context(session: Session, k: int):
    """Last ``min(k, len)`` records plus the best-assessed record so far.

    "Best" follows clear > recognizable > not recognizable (comparisons and
    free answers rank below all three); ties resolve to the lowest step. The
    result is deduplicated and ascending by step.
    """
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    records = session.records
    if not records:
        return []
    chosen = {r.step: r for r in records[-k:]}
    best = max(records, key=lambda r: (r.assessment.rank, -r.step))
    chosen[best.step] = best
    return [chosen[s] for s in sorted(chosen)]


class SessionStore:
    """Disk-backed store: <root>/<id>.json + <root>/images/<sha256>.png.

    Appends are serialized per session; records and status changes rewrite
    the session file atomically.
    """

    def __init__(self, root):
        self.root = Path(root)
        self.images_dir = self.root / "images"
        self.root.mkdir(parents=True, exist_ok=True)
        self.images_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict = {}
        self._guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def session_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def image_path(self, ref: str) -> Path:
        return self.images_dir / f"{ref}.png"

    def store_image(self, png: bytes) -> str:
        ref = content_hash(png)
        path = self.image_path(ref)
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(png)
            os.replace(tmp, path)
        return ref

    def load_image(self, ref: str) -> bytes:
        return self.image_path(ref).read_bytes()

    def has_image(self, ref: str) -> bool:
        return self.image_path(ref).exists()

    def save(self, session: Session) -> None:
        with self._lock(session.id):
            path = self.session_path(session.id)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(session.to_json(), encoding="utf-8")
            os.replace(tmp, path)

    def load(self, session_id: str) -> Session:
        path = self.session_path(session_id)
        return Session.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def exists(self, session_id: str) -> bool:
        return self.session_path(session_id).exists()

    def list_ids(self) -> list:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def recover_interrupted(self) -> list:
        """Mark sessions left running/paused by a dead process as failed."""
        repaired = []
        for sid in self.list_ids():
            session = self.load(sid)
            if not session.is_terminal:
                session.status = STATUS_FAILED
                session.failure_reason = "interrupted"
                self.save(session)
                repaired.append(sid)
        return repaired


def mark_success(session: Session, final_params: ParamVector) -> Session:
    session.status = STATUS_DONE_SUCCESS
    session.final_params = final_params
    return session


def mark_failed(session: Session, reason: str) -> Session:
    session.status = STATUS_FAILED
    session.failure_reason = reason
    return session
