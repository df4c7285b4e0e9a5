"""Heuristic transfer-function window search.

A fixed-width window (one of ``bins`` equal slices of the scalar range)
sweeps from the bottom of the range toward the top. A "not recognizable"
verdict shifts it a full step, "recognizable" switches to fine tuning and
shifts by ``speed_reduction`` of a step, "clear" stops.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import WrongAssessmentKind
from ..params import ParamVector
from ..perception.assessment import CLEAR, NOT_RECOGNIZABLE, RECOGNIZABLE, Assessment
from .steps import PlannerStep


@dataclass(frozen=True)
class TfSearchState:
    min_val: float
    max_val: float
    bins: int = 10
    window_factor: float = 1.0
    speed_reduction: float = 0.5
    start_point: float = None  # type: ignore[assignment]
    end_point: float = None  # type: ignore[assignment]
    fine_tuning: bool = False
    iterations: int = 0

    def __post_init__(self):
        if not self.min_val < self.max_val:
            raise ValueError(f"need min_val < max_val, got [{self.min_val}, {self.max_val}]")
        if self.bins < 1:
            raise ValueError(f"bins must be >= 1, got {self.bins}")
        if self.window_factor <= 0:
            raise ValueError(f"window_factor must be positive, got {self.window_factor}")
        if not 0.0 < self.speed_reduction <= 1.0:
            raise ValueError(f"speed_reduction must be in (0, 1], got {self.speed_reduction}")
        if self.start_point is None:
            object.__setattr__(self, "start_point", self.min_val)
        if self.end_point is None:
            object.__setattr__(self, "end_point", self.start_point + self.window_width)
        if self.start_point < self.min_val:
            raise ValueError(f"start_point {self.start_point} below min_val {self.min_val}")
        if abs(self.end_point - (self.start_point + self.window_width)) > 1e-9 * self.window_width:
            raise ValueError("end_point must equal start_point + window_width")

    @property
    def scalar_range(self) -> float:
        return self.max_val - self.min_val

    @property
    def window_width(self) -> float:
        return self.scalar_range / self.bins

    @property
    def step_size(self) -> float:
        return self.window_width * self.window_factor

    def window_params(self) -> ParamVector:
        return ParamVector({"start": self.start_point, "end": self.end_point})


def tf_search_step(state: TfSearchState, assessment: Assessment):
    """One search transition; returns (new state, planner step).

    The assessment refers to the render of the current window. The sweep
    fails once the window start would leave the scalar range without a
    "clear" stop.
    """
    if not assessment.is_volume_verdict():
        raise WrongAssessmentKind(f"transfer-function search cannot act on {assessment.kind!r}")

    if assessment.kind == CLEAR:
        done = replace(state, iterations=state.iterations + 1)
        return done, PlannerStep.done(
            state.window_params(),
            plan=f"structure clear in window [{state.start_point:g}, {state.end_point:g}]; stopping",
        )

    if assessment.kind == NOT_RECOGNIZABLE:
        shift = state.step_size
        fine = state.fine_tuning
        why = "structure not recognizable; shifting window a full step"
    elif assessment.kind == RECOGNIZABLE:
        shift = state.step_size * state.speed_reduction
        fine = True
        why = "structure recognizable; fine tuning with a reduced shift"
    else:  # pragma: no cover - guarded above
        raise WrongAssessmentKind(assessment.kind)

    # keep the full-width window inside the scalar range: clamp a shift that
    # would overhang, and fail once no forward progress is possible
    cap = state.max_val - state.window_width
    eps = 1e-12 * state.scalar_range
    new_start = state.start_point + shift
    if new_start > cap + eps:
        if state.start_point >= cap - eps:
            failed = replace(state, iterations=state.iterations + 1)
            return failed, PlannerStep.failed("swept range without clear")
        new_start = cap

    new_state = replace(
        state,
        start_point=new_start,
        end_point=new_start + state.window_width,
        fine_tuning=fine,
        iterations=state.iterations + 1,
    )
    return new_state, PlannerStep.next(
        new_state.window_params(),
        plan=f"{why}: next window [{new_state.start_point:g}, {new_state.end_point:g}]",
    )
