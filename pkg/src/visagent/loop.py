"""The visualization → perception → action loop."""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

from .config import AgentConfig
from .errors import PerceptionError, VisAgentError
from .memory import (
    STATUS_DONE_BUDGET,
    IterationRecord,
    Session,
    mark_failed,
    mark_success,
)
from .params import ParamVector
from .perception.assessment import Assessment
from .planners.steps import PlannerStep
from .responses import ParsedResponse


@dataclass
class RenderView:
    """One rendered frame plus its side channels."""

    params: ParamVector
    png: bytes
    stats: Optional[dict]
    image_ref: str


@dataclass
class PerceptionOutput:
    assessment: Assessment
    reasoning: str = ""
    parsed: Optional[ParsedResponse] = None


@dataclass
class LoopContext:
    """Mutable state the adapters may consult during a run."""

    session: Session
    descriptor: object
    store: object
    current_params: Optional[ParamVector] = None
    extra: dict = field(default_factory=dict)

    @property
    def goal(self) -> str:
        return self.session.goal


class Tool(Protocol):
    def describe(self): ...

    def render(self, params: ParamVector): ...


class Perception(Protocol):
    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput: ...


class Planner(Protocol):
    def initial_params(self) -> ParamVector: ...

    def observe(self, output: PerceptionOutput, ctx: LoopContext) -> PlannerStep: ...


CONTINUE = "continue"
ABORT = "abort"


@dataclass
class ControlDecision:
    action: str = CONTINUE
    override: Optional[ParamVector] = None
    reason: str = ""


class InMemoryStore:
    """Ephemeral image/session store for library use and tests."""

    def __init__(self):
        self.images: dict = {}
        self.sessions: dict = {}

    def store_image(self, png: bytes) -> str:
        from .imaging import content_hash

        ref = content_hash(png)
        self.images[ref] = png
        return ref

    def load_image(self, ref: str) -> bytes:
        return self.images[ref]

    def has_image(self, ref: str) -> bool:
        return ref in self.images

    def save(self, session: Session) -> None:
        self.sessions[session.id] = session


def _wall_ms() -> int:
    return int(time.monotonic() * 1000.0)


def _assess_with_retries(perception: Perception, view, ctx, retries: int) -> PerceptionOutput:
    last = None
    for _ in range(retries + 1):
        try:
            return perception.assess(view, ctx)
        except VisAgentError as exc:
            last = exc
    raise PerceptionError(f"perception failed after {retries + 1} attempt(s): {last}") from last


def run_loop(
    config: AgentConfig,
    goal: str,
    tool: Tool,
    perception: Perception,
    planner: Planner,
    *,
    store=None,
    session_id: Optional[str] = None,
    clock: Optional[Callable[[], int]] = None,
    control=None,
    on_record=None,
    on_status=None,
) -> Session:
    """Render, assess, and plan until the planner stops or the budget runs out.

    Every iteration performs exactly one tool render and appends exactly one
    IterationRecord. The optional ``control`` object is consulted between
    iterations (pause/override/abort); ``clock`` supplies wall-time stamps and
    can be pinned for reproducible session files.
    """
    store = store if store is not None else InMemoryStore()
    clock = clock or _wall_ms
    descriptor = tool.describe()  # raises ToolUnreachable before any state exists

    session = Session(id=session_id or uuid.uuid4().hex, goal=goal, config=config)
    ctx = LoopContext(session=session, descriptor=descriptor, store=store)
    retries = int(config.perception_params.get("retries", 0))

    params = planner.initial_params()
    store.save(session)
    if on_status:
        on_status(session)

    for step_idx in range(config.max_iterations):
        if control is not None:
            decision = control.checkpoint(session)
            if decision.action == ABORT:
                mark_failed(session, decision.reason or "aborted")
                break
            if decision.override is not None:
                params = decision.override
                force = getattr(planner, "force_params", None)
                if force is not None:
                    force(params)

        t0 = clock()
        png, stats = tool.render(params)
        image_ref = store.store_image(png)
        view = RenderView(params=params, png=png, stats=stats, image_ref=image_ref)
        ctx.current_params = params

        output = _assess_with_retries(perception, view, ctx, retries)
        step = planner.observe(output, ctx)

        record = IterationRecord(
            step=step_idx,
            params=params,
            image_ref=image_ref,
            reasoning=output.reasoning,
            plan=step.plan,
            assessment=output.assessment,
            wall_time_ms=max(clock() - t0, 0),
        )
        session.records.append(record)
        store.save(session)
        if on_record:
            on_record(session, record)

        if step.is_done:
            mark_success(session, step.params)
            break
        if step.is_failed:
            mark_failed(session, step.reason)
            break
        params = step.params
    else:
        session.status = STATUS_DONE_BUDGET

    usage = getattr(perception, "usage", None)
    if callable(usage):
        session.token_usage = usage()
    session.validate()
    store.save(session)
    if on_status:
        on_status(session)
    return session
