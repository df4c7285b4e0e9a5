"""Live session management: background loop workers, control commands, and
an ordered event log with replay-then-live subscriptions."""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from ..config import AgentConfig
from ..errors import ConfigError, VisAgentError
from ..factory import make_perception, make_tool
from ..loop import ABORT, CONTINUE, ControlDecision, run_loop
from ..memory import STATUS_PAUSED, STATUS_RUNNING, SessionStore
from ..params import ParamVector
from ..planners import build_planner

CMD_PAUSE = "pause"
CMD_RESUME = "resume"
CMD_ABORT = "abort"
CMD_OVERRIDE = "override_params"
CMD_AMEND_GOAL = "amend_goal"
COMMANDS = (CMD_PAUSE, CMD_RESUME, CMD_ABORT, CMD_OVERRIDE, CMD_AMEND_GOAL)


class UnknownSession(VisAgentError):
    pass


class InvalidTransition(VisAgentError):
    pass


@dataclass
class SessionEntry:
    id: str
    cond: threading.Condition = field(default_factory=lambda: threading.Condition(threading.RLock()))
    events: list = field(default_factory=list)
    pause_requested: bool = False
    abort_requested: bool = False
    override: ParamVector | None = None
    amended_goal: str | None = None
    parked: bool = False
    status: str = STATUS_RUNNING
    terminal: bool = False
    worker: threading.Thread | None = None


class _WorkerControl:
    """Applied at loop-iteration boundaries: pause parks the worker before
    the next render; override is consumed exactly once on resume."""

    def __init__(self, entry: SessionEntry, manager: "SessionManager"):
        self.entry = entry
        self.manager = manager

    def checkpoint(self, session) -> ControlDecision:
        entry = self.entry
        override = None
        with entry.cond:
            if entry.amended_goal is not None:
                session.goal = entry.amended_goal
                entry.amended_goal = None
            if entry.pause_requested and not entry.abort_requested:
                entry.parked = True
                session.status = STATUS_PAUSED
                entry.status = STATUS_PAUSED
                self.manager.store.save(session)
                self.manager._emit(entry, "status", {"status": STATUS_PAUSED})
                entry.cond.notify_all()
                while entry.pause_requested and not entry.abort_requested:
                    entry.cond.wait()
                entry.parked = False
                if not entry.abort_requested:
                    session.status = STATUS_RUNNING
                    entry.status = STATUS_RUNNING
                    self.manager.store.save(session)
                    self.manager._emit(entry, "status", {"status": STATUS_RUNNING})
            if entry.abort_requested:
                return ControlDecision(action=ABORT, reason="aborted")
            if entry.override is not None:
                override = entry.override
                entry.override = None
            if entry.amended_goal is not None:
                session.goal = entry.amended_goal
                entry.amended_goal = None
        return ControlDecision(action=CONTINUE, override=override)


class SessionManager:
    def __init__(self, store: SessionStore):
        self.store = store
        self.entries: dict = {}
        self._guard = threading.Lock()
        self.store.recover_interrupted()

    # ---- lifecycle ----

    def create_session(self, config_dict: dict, goal: str, tool_spec: dict,
                       perception_spec: str | None = None) -> str:
        try:
            config = AgentConfig.from_dict(config_dict)
            if not goal or not str(goal).strip():
                raise ConfigError("goal must be non-empty")
            tool = make_tool(tool_spec)
        except ConfigError:
            raise
        descriptor = tool.describe()  # raises ToolUnreachable for dead endpoints
        perception = make_perception(config, descriptor, perception_spec)
        planner = build_planner(config, descriptor)

        session_id = uuid.uuid4().hex[:12]
        entry = SessionEntry(id=session_id)
        with self._guard:
            self.entries[session_id] = entry

        def work():
            try:
                run_loop(
                    config,
                    goal,
                    tool,
                    perception,
                    planner,
                    store=self.store,
                    session_id=session_id,
                    control=_WorkerControl(entry, self),
                    on_record=lambda session, record: self._emit(entry, "record", record.to_dict()),
                    on_status=lambda session: self._on_status(entry, session),
                )
            except VisAgentError as exc:
                with entry.cond:
                    entry.status = "failed"
                    self._emit(entry, "status", {"status": "failed", "reason": str(exc)})
                    entry.terminal = True
                    entry.cond.notify_all()

        worker = threading.Thread(target=work, name=f"session-{session_id}", daemon=True)
        entry.worker = worker
        worker.start()
        return session_id

    def _on_status(self, entry: SessionEntry, session) -> None:
        with entry.cond:
            entry.status = session.status
            payload = {"status": session.status}
            if session.failure_reason:
                payload["reason"] = session.failure_reason
            if session.final_params is not None:
                payload["final_params"] = session.final_params.to_dict()
            self._emit(entry, "status", payload)
            if session.is_terminal:
                entry.terminal = True
                entry.cond.notify_all()

    def _emit(self, entry: SessionEntry, kind: str, data: dict) -> None:
        with entry.cond:  # reentrant: safe from checkpoint and callbacks alike
            entry.events.append({"seq": len(entry.events), "event": kind, "data": data})
            entry.cond.notify_all()

    def entry_for(self, session_id: str) -> SessionEntry:
        with self._guard:
            entry = self.entries.get(session_id)
        if entry is None:
            if self.store.exists(session_id):
                return self._entry_from_disk(session_id)
            raise UnknownSession(session_id)
        return entry

    def _entry_from_disk(self, session_id: str) -> SessionEntry:
        """Rebuild a replayable event log for a session from a prior process."""
        session = self.store.load(session_id)
        entry = SessionEntry(id=session_id)
        entry.status = session.status
        entry.terminal = session.is_terminal
        entry.events.append({"seq": 0, "event": "status", "data": {"status": STATUS_RUNNING}})
        for record in session.records:
            entry.events.append({"seq": len(entry.events), "event": "record", "data": record.to_dict()})
        payload = {"status": session.status}
        if session.failure_reason:
            payload["reason"] = session.failure_reason
        entry.events.append({"seq": len(entry.events), "event": "status", "data": payload})
        with self._guard:
            return self.entries.setdefault(session_id, entry)

    # ---- event streaming ----

    def subscribe(self, session_id: str):
        """Yield every event exactly once: full replay, then live events,
        closing after the terminal status event."""
        entry = self.entry_for(session_id)
        cursor = 0
        while True:
            with entry.cond:
                while cursor >= len(entry.events) and not entry.terminal:
                    entry.cond.wait(timeout=30.0)
                batch = entry.events[cursor:]
                cursor += len(batch)
                done = entry.terminal and cursor >= len(entry.events)
            for event in batch:
                yield event
            if done:
                return

    # ---- control ----

    def control(self, session_id: str, command: dict) -> str:
        entry = self.entry_for(session_id)
        kind = command.get("kind")
        if kind not in COMMANDS:
            raise ConfigError(f"unknown control command {kind!r}")

        with entry.cond:
            if entry.terminal:
                raise InvalidTransition(f"session is terminal ({entry.status})")
            if kind == CMD_PAUSE:
                if entry.pause_requested or entry.status == STATUS_PAUSED:
                    raise InvalidTransition("already paused")
                entry.pause_requested = True
                # ack once the worker has actually parked (before its next render)
                while not entry.parked and not entry.terminal:
                    entry.cond.wait(timeout=10.0)
                return STATUS_PAUSED if not entry.terminal else entry.status
            if kind == CMD_RESUME:
                if not entry.pause_requested:
                    raise InvalidTransition("not paused")
                entry.pause_requested = False
                entry.cond.notify_all()
                return STATUS_RUNNING
            if kind == CMD_ABORT:
                entry.abort_requested = True
                entry.pause_requested = False
                entry.cond.notify_all()
                while not entry.terminal:
                    entry.cond.wait(timeout=10.0)
                return entry.status
            if kind == CMD_OVERRIDE:
                if not (entry.pause_requested and entry.parked):
                    raise InvalidTransition("override_params is only valid while paused")
                params = command.get("params")
                if not isinstance(params, dict) or not params:
                    raise ConfigError("override_params needs a non-empty params object")
                entry.override = ParamVector(params)
                return STATUS_PAUSED
            # amend_goal: allowed while running or paused
            goal = command.get("goal", "")
            if not str(goal).strip():
                raise ConfigError("amend_goal needs non-empty goal text")
            entry.amended_goal = str(goal)
            return entry.status

    def wait(self, session_id: str, timeout: float = 60.0) -> str:
        entry = self.entry_for(session_id)
        deadline = time.monotonic() + timeout
        with entry.cond:
            while not entry.terminal:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                entry.cond.wait(timeout=min(remaining, 0.5))
        return entry.status
