"""Loop-facing planner adapters wrapping the pure step functions."""

from __future__ import annotations

from dataclasses import replace

from ..errors import ConfigError
from ..params import KIND_CATEGORICAL, KIND_INTEGER, ParamSpace, ParamVector
from ..perception.assessment import ANSWER
from .halving import HalvingState, halving_step
from .llm_centric import DEFAULT_STOP_LABEL, llm_plan_step
from .steps import PlannerStep
from .tf_search import TfSearchState, tf_search_step


class TfSearchPlanner:
    """Window sweep over (start, end) driven by volume recognizability verdicts."""

    def __init__(self, state: TfSearchState):
        self.state = state

    def initial_params(self) -> ParamVector:
        return self.state.window_params()

    def observe(self, output, ctx) -> PlannerStep:
        self.state, step = tf_search_step(self.state, output.assessment)
        return step

    def force_params(self, params: ParamVector) -> None:
        start = float(params["start"])
        self.state = replace(self.state, start_point=start, end_point=start + self.state.window_width)


class HalvingPlanner:
    """Opacity bracket halving; the first observation is the baseline render."""

    def __init__(self, state: HalvingState):
        self.state = state
        self._seen_baseline = False

    def initial_params(self) -> ParamVector:
        return ParamVector({"opacity": self.state.opacity})

    def observe(self, output, ctx) -> PlannerStep:
        if not self._seen_baseline and output.assessment.kind == ANSWER:
            self._seen_baseline = True
            return PlannerStep.next(
                self.state.proposal(),
                plan=f"baseline at opacity {self.state.opacity:g}; proposing midpoint {self.state.midpoint:g}",
            )
        self._seen_baseline = True
        self.state, step = halving_step(self.state, output.assessment)
        return step

    def force_params(self, params: ParamVector) -> None:
        opacity = float(params["opacity"])
        if self.state.floor < opacity <= 1.0:
            self.state = replace(self.state, opacity=opacity)


class LlmCentricPlanner:
    """Pass-through of model-proposed parameters, clamped to the tool's space."""

    def __init__(self, space: ParamSpace, initial: ParamVector, stop_label: str = DEFAULT_STOP_LABEL):
        self.space = space
        self.initial = initial
        self.stop_label = stop_label
        self._last = initial

    def initial_params(self) -> ParamVector:
        return self.initial

    def observe(self, output, ctx) -> PlannerStep:
        if output.parsed is None:
            return PlannerStep.failed("llm-centric planning needs a parsed tagged response")
        last = ctx.current_params if ctx.current_params is not None else self._last
        step = llm_plan_step(output.parsed, self.space, last, stop_label=self.stop_label)
        if step.params is not None:
            self._last = step.params
        return step

    def force_params(self, params: ParamVector) -> None:
        self._last = params


def default_initial_params(space: ParamSpace, metadata: dict | None = None) -> ParamVector:
    """Tool-declared defaults when present, else midpoints / first choices."""
    declared = (metadata or {}).get("default_params")
    if declared:
        vector, _ = space.clamp(declared)
        if set(vector) == set(space.names()):
            return vector
    values = {}
    for entry in space.entries:
        if entry.kind == KIND_CATEGORICAL:
            values[entry.name] = entry.choices[0]
        elif entry.kind == KIND_INTEGER:
            values[entry.name] = int(round((entry.lower + entry.upper) / 2.0))
        else:
            values[entry.name] = (entry.lower + entry.upper) / 2.0
    return ParamVector(values)


def build_planner(config, descriptor):
    """Construct the configured planner against a tool descriptor."""
    from ..config import PLANNER_HALVING, PLANNER_HEURISTIC_TF, PLANNER_LLM

    pp = config.planner_params
    if config.planner_kind == PLANNER_HEURISTIC_TF:
        value_range = (descriptor.metadata or {}).get("value_range")
        if not value_range:
            raise ConfigError("heuristic_tf planner needs the tool to expose a value_range")
        state = TfSearchState(
            min_val=float(value_range[0]),
            max_val=float(value_range[1]),
            bins=int(pp.get("bins", 10)),
            window_factor=float(pp.get("window_factor", 1.0)),
            speed_reduction=float(pp.get("speed_reduction", 0.5)),
        )
        return TfSearchPlanner(state)
    if config.planner_kind == PLANNER_HALVING:
        state = HalvingState(
            opacity=float(pp.get("initial_opacity", 1.0)),
            floor=float(pp.get("floor_opacity", 0.0)),
            threshold=float(config.stop_threshold),
            stall_nudge=bool(pp.get("stall_nudge", True)),
        )
        return HalvingPlanner(state)
    if config.planner_kind == PLANNER_LLM:
        initial = default_initial_params(descriptor.param_space, descriptor.metadata)
        return LlmCentricPlanner(
            space=descriptor.param_space,
            initial=initial,
            stop_label=str(pp.get("stop_label", DEFAULT_STOP_LABEL)),
        )
    raise ConfigError(f"unknown planner kind {config.planner_kind!r}")
