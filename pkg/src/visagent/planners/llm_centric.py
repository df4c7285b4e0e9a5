"""LLM-centric planning: the model proposes the next parameters itself."""

from __future__ import annotations

from ..params import ParamSpace, ParamVector
from ..responses import ParsedResponse
from .steps import PlannerStep

DEFAULT_STOP_LABEL = "clear"


def llm_plan_step(
    parsed: ParsedResponse,
    space: ParamSpace,
    last_params: ParamVector,
    stop_label: str = DEFAULT_STOP_LABEL,
) -> PlannerStep:
    """Turn a parsed model response into the next planner step.

    The stop label ends the run at the last rendered parameters; otherwise
    proposed parameters are clamped into the space (clamps are recorded in
    the step's plan text) and missing parameters keep their previous values.
    """
    label = parsed.assessment_label.strip().lower()
    if stop_label and stop_label.lower() in label:
        return PlannerStep.done(last_params, plan=parsed.plan or "assessment met the stop label")

    if parsed.proposed_params is None:
        return PlannerStep.failed("no parameters proposed")

    clamped, log = space.clamp(parsed.proposed_params)
    merged = last_params.merged(clamped)
    plan = parsed.plan
    if log:
        plan = (plan + "; " if plan else "") + "; ".join(log)
    return PlannerStep.next(merged, plan=plan)
