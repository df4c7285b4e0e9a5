"""Bracket-halving search for scatterplot point opacity.

Overplotting improves only as opacity drops far below 1, so the search keeps
a bracket [floor, current] and each step proposes its midpoint: the midpoint
render is compared against the current one, a "too low" verdict raises the
floor, a win for the midpoint lowers the current opacity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..errors import WrongAssessmentKind
from ..params import ParamVector
from ..perception.assessment import COMPARISON, FIRST, Assessment
from .steps import PlannerStep


@dataclass(frozen=True)
class HalvingState:
    opacity: float = 1.0
    floor: float = 0.0
    threshold: float = 0.05
    # invented escape hatch: when the lower candidate loses without being too
    # low, raise the floor a quarter bracket so the search still progresses
    stall_nudge: bool = True

    def __post_init__(self):
        if not 0.0 < self.opacity <= 1.0:
            raise ValueError(f"opacity must be in (0, 1], got {self.opacity}")
        if not 0.0 <= self.floor < self.opacity:
            raise ValueError(f"floor must be in [0, opacity), got {self.floor}")
        if self.threshold <= 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")

    @property
    def bracket(self) -> float:
        return self.opacity - self.floor

    @property
    def midpoint(self) -> float:
        return self.floor + (self.opacity - self.floor) / 2.0

    def proposal(self) -> ParamVector:
        return ParamVector({"opacity": self.midpoint})


def halving_step(state: HalvingState, assessment: Assessment):
    """Apply one comparison of render(midpoint) [first] vs render(opacity)
    [second]; returns (new state, planner step)."""
    if assessment.kind != COMPARISON:
        raise WrongAssessmentKind(f"halving search needs a pairwise comparison, got {assessment.kind!r}")
    cmp = assessment.comparison
    candidate = state.midpoint

    if cmp.too_low:
        new_state = replace(state, floor=candidate)
        why = f"opacity {candidate:g} too low; floor raised to {candidate:g}"
    elif cmp.winner == FIRST:
        new_state = replace(state, opacity=candidate)
        why = f"opacity {candidate:g} preferred; current lowered to {candidate:g}"
    elif state.stall_nudge:
        new_state = replace(state, floor=state.floor + state.bracket / 4.0)
        why = f"current opacity {state.opacity:g} still preferred; floor nudged to {new_state.floor:g}"
    else:
        return state, PlannerStep.failed("comparison rejected the midpoint and stall nudging is disabled")

    if new_state.bracket <= new_state.threshold:
        return new_state, PlannerStep.done(
            ParamVector({"opacity": new_state.opacity}),
            plan=f"{why}; bracket {new_state.bracket:g} within threshold {new_state.threshold:g}",
        )
    return new_state, PlannerStep.next(
        new_state.proposal(),
        plan=f"{why}; next midpoint {new_state.midpoint:g}",
    )
