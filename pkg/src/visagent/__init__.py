"""Autonomous visualization agents: a render -> perceive -> plan loop over
pluggable visualization tools, with deterministic perception oracles for
verification and a vision-LLM client for live runs."""

from .config import AgentConfig
from .loop import InMemoryStore, run_loop
from .memory import IterationRecord, Session, SessionStore, select_context
from .params import ParamEntry, ParamSpace, ParamVector
from .perception.assessment import Assessment
from .prompts import render_role_prompt
from .responses import ParsedResponse, format_agent_response, parse_agent_response

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "Assessment",
    "InMemoryStore",
    "IterationRecord",
    "ParamEntry",
    "ParamSpace",
    "ParamVector",
    "ParsedResponse",
    "Session",
    "SessionStore",
    "format_agent_response",
    "parse_agent_response",
    "render_role_prompt",
    "run_loop",
    "select_context",
]
