from .adapters import (
    HalvingPlanner,
    LlmCentricPlanner,
    TfSearchPlanner,
    build_planner,
    default_initial_params,
)
from .halving import HalvingState, halving_step
from .llm_centric import llm_plan_step
from .steps import PlannerStep
from .tf_search import TfSearchState, tf_search_step

__all__ = [
    "HalvingPlanner",
    "HalvingState",
    "LlmCentricPlanner",
    "PlannerStep",
    "TfSearchPlanner",
    "TfSearchState",
    "build_planner",
    "default_initial_params",
    "halving_step",
    "llm_plan_step",
    "tf_search_step",
]
