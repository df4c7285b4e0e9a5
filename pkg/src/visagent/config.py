"""Agent configuration: template fields, planner/perception selection, budgets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConfigError

PLANNER_HEURISTIC_TF = "heuristic_tf"
PLANNER_HALVING = "halving_opacity"
PLANNER_LLM = "llm_centric"
PLANNER_KINDS = (PLANNER_HEURISTIC_TF, PLANNER_HALVING, PLANNER_LLM)

PERCEPTION_ORACLE = "oracle"
PERCEPTION_LLM = "llm"
PERCEPTION_KINDS = (PERCEPTION_ORACLE, PERCEPTION_LLM)

# parameter names each planner accepts via planner_params
PLANNER_PARAM_NAMES = {
    PLANNER_HEURISTIC_TF: ("bins", "window_factor", "speed_reduction"),
    PLANNER_HALVING: ("initial_opacity", "floor_opacity", "stall_nudge"),
    PLANNER_LLM: ("context_window", "stop_label"),
}


@dataclass(frozen=True)
class AgentConfig:
    scenario: str
    task: str
    goal_template: str
    approach: str
    constraints: tuple = ()
    planner_kind: str = PLANNER_HEURISTIC_TF
    perception_kind: str = PERCEPTION_ORACLE
    max_iterations: int = 12
    stop_threshold: float = 0.05
    planner_params: dict = field(default_factory=dict)
    perception_params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.planner_kind not in PLANNER_KINDS:
            raise ConfigError(f"unknown planner kind {self.planner_kind!r} (choose from {PLANNER_KINDS})")
        if self.perception_kind not in PERCEPTION_KINDS:
            raise ConfigError(f"unknown perception kind {self.perception_kind!r}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.stop_threshold < 0:
            raise ConfigError(f"stop_threshold must be >= 0, got {self.stop_threshold}")
        for c in self.constraints:
            if not isinstance(c, str) or not c.strip():
                raise ConfigError("constraints must be non-empty text")
        allowed = set(PLANNER_PARAM_NAMES[self.planner_kind])
        unknown = set(self.planner_params) - allowed
        if unknown:
            raise ConfigError(
                f"planner_params {sorted(unknown)} not accepted by {self.planner_kind} (allowed: {sorted(allowed)})"
            )

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "task": self.task,
            "goal_template": self.goal_template,
            "approach": self.approach,
            "constraints": list(self.constraints),
            "planner_kind": self.planner_kind,
            "perception_kind": self.perception_kind,
            "max_iterations": self.max_iterations,
            "stop_threshold": self.stop_threshold,
            "planner_params": dict(self.planner_params),
            "perception_params": dict(self.perception_params),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "AgentConfig":
        try:
            return cls(
                scenario=d["scenario"],
                task=d["task"],
                goal_template=d["goal_template"],
                approach=d["approach"],
                constraints=tuple(d.get("constraints", ())),
                planner_kind=d.get("planner_kind", PLANNER_HEURISTIC_TF),
                perception_kind=d.get("perception_kind", PERCEPTION_ORACLE),
                max_iterations=int(d.get("max_iterations", 12)),
                stop_threshold=float(d.get("stop_threshold", 0.05)),
                planner_params=dict(d.get("planner_params", {})),
                perception_params=dict(d.get("perception_params", {})),
            )
        except KeyError as exc:
            raise ConfigError(f"config missing required field {exc}") from exc

    @classmethod
    def from_json_file(cls, path) -> "AgentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
