"""Scripted perception backends: deterministic stand-ins for a vision model.

These drive the LLM-centric machinery (tagged responses, parameter proposals)
without any network dependency, for tests, benchmarks, and offline runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..loop import LoopContext, PerceptionOutput, RenderView
from ..responses import parse_agent_response
from .assessment import label_to_assessment


def _output_from_text(text: str) -> PerceptionOutput:
    parsed = parse_agent_response(text)
    return PerceptionOutput(
        assessment=label_to_assessment(parsed.assessment_label),
        reasoning=parsed.reasoning,
        parsed=parsed,
    )


def _tagged(reasoning: str, plan: str, label: str, params: Optional[dict] = None) -> str:
    text = f"REASONING: {reasoning}\nPLAN: {plan}\nASSESSMENT: {label}"
    if params is not None:
        text += f"\nPARAMS: {json.dumps(params)}"
    return text


@dataclass
class ScriptedPerception:
    """Replays a fixed list of tagged responses, one per assess call."""

    responses: list
    cursor: int = 0

    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput:
        text = self.responses[min(self.cursor, len(self.responses) - 1)]
        self.cursor += 1
        return _output_from_text(text)


@dataclass
class GridSearchStub:
    """Deterministic coarse-to-fine search over one hyperparameter.

    Sweeps a small grid, shrinks the bracket around the best point after each
    pass, re-renders the best value, then stops with the "clear" label. The
    quality signal comes from the tool's render stats: either read directly
    (hill-aware mode) or used only through better/worse comparisons against
    the incumbent best render (comparison mode); both modes visit the same
    points, so the distinction is in what information each decision consumed.
    """

    param: str
    lower: float
    upper: float
    signal: str = "separation"
    points_per_pass: int = 5
    passes: int = 2
    compare_only: bool = False
    _grid: list = field(default_factory=list)
    _next: int = 0
    _pass: int = 0
    _phase: str = "probe"  # probe -> stop (after re-rendering the best point)
    _best: Optional[tuple] = None  # (score, value)

    def _make_grid(self, lo: float, hi: float) -> list:
        n = self.points_per_pass
        return [lo + (hi - lo) * i / (n - 1) for i in range(n)]

    def _note(self, score: float, value: float) -> str:
        if self._best is None:
            self._best = (score, value)
            return f"first render at {self.param}={value:.4f} becomes the incumbent"
        if score > self._best[0]:
            if self.compare_only:
                note = f"candidate {self.param}={value:.4f} wins the pairwise comparison"
            else:
                note = f"{self.signal}={score:.4f} at {self.param}={value:.4f} is a new best"
            self._best = (score, value)
            return note
        if self.compare_only:
            return f"incumbent {self.param}={self._best[1]:.4f} wins the pairwise comparison"
        return f"{self.signal}={score:.4f} at {self.param}={value:.4f} does not beat the best"

    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput:
        score = float((view.stats or {}).get(self.signal, 0.0))
        value = float(view.params.get(self.param, self.lower))
        note = self._note(score, value)

        if self._phase == "stop":
            return _output_from_text(
                _tagged(note, f"settled on {self.param}={self._best[1]:.4f}", "clear")
            )

        if not self._grid:
            self._grid = self._make_grid(self.lower, self.upper)
            self._next = 0
        if self._next >= len(self._grid):
            self._pass += 1
            if self._pass >= self.passes:
                self._phase = "stop"
                return _output_from_text(
                    _tagged(note, f"re-render the best value {self.param}={self._best[1]:.4f}", "searching",
                            {self.param: self._best[1]})
                )
            half = (self._grid[-1] - self._grid[0]) / (self.points_per_pass - 1)
            lo = max(self.lower, self._best[1] - half)
            hi = min(self.upper, self._best[1] + half)
            self._grid = self._make_grid(lo, hi)
            self._next = 0

        proposal = self._grid[self._next]
        self._next += 1
        return _output_from_text(
            _tagged(
                note,
                f"probe point {self._next}/{len(self._grid)} of pass {self._pass + 1}",
                "searching",
                {self.param: proposal},
            )
        )


def hill_climb_stub(param: str, lower: float, upper: float, **kw) -> GridSearchStub:
    """Search stub that reads the scalar quality signal directly."""
    return GridSearchStub(param=param, lower=lower, upper=upper, compare_only=False, **kw)


def comparison_stub(param: str, lower: float, upper: float, **kw) -> GridSearchStub:
    """Search stub restricted to pairwise better/worse decisions."""
    return GridSearchStub(param=param, lower=lower, upper=upper, compare_only=True, **kw)


@dataclass
class BouncingStub:
    """Alternates between opposite corners of a multi-parameter space and
    never settles; reproduces non-converging high-dimensional searches."""

    corners: list  # dict proposals to cycle through
    cursor: int = 0

    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput:
        proposal = self.corners[self.cursor % len(self.corners)]
        self.cursor += 1
        return _output_from_text(
            _tagged(
                f"embedding still looks ambiguous at {dict(view.params)}",
                "jump to the opposite corner of the hyperparameter space",
                "searching",
                proposal,
            )
        )
