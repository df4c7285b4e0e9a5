"""Loop-facing perception adapters: deterministic oracles and the LLM client."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..charts.scatter import OverplotMetrics
from ..errors import PerceptionError
from ..loop import LoopContext, PerceptionOutput, RenderView
from ..memory import select_context
from ..prompts import render_role_prompt
from ..volren.render import StructureStats
from .assessment import FIRST, Assessment, label_to_assessment
from .llm import ChatClient, llm_assess
from .oracle import OracleThresholds, oracle_assess_volume, oracle_compare_scatter


def structure_stats_from(stats: Optional[dict]) -> dict:
    if not stats or "structures" not in stats:
        raise PerceptionError("tool returned no per-structure stats; volume oracle needs masks")
    return {sid: StructureStats.from_dict(d) for sid, d in stats["structures"].items()}


def overplot_from(stats: Optional[dict]) -> OverplotMetrics:
    if not stats or "overplot" not in stats:
        raise PerceptionError("tool returned no overplot stats; scatter oracle needs the coverage channel")
    return OverplotMetrics.from_dict(stats["overplot"])


@dataclass
class VolumeOraclePerception:
    """Recognizability verdicts for a target structure from renderer stats."""

    target: str
    thresholds: OracleThresholds = field(default_factory=OracleThresholds)

    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput:
        stats = structure_stats_from(view.stats)
        verdict = oracle_assess_volume(stats, self.target, self.thresholds)
        s = stats[self.target]
        return PerceptionOutput(
            assessment=verdict,
            reasoning=(
                f"oracle: {self.target} coverage={s.silhouette_coverage:.3f} "
                f"share={s.mean_share:.3f} occluded={s.occluder_share:.3f} -> {verdict.kind}"
            ),
        )


@dataclass
class OverplotComparisonPerception:
    """Pairwise overplot comparison of each render against the current best.

    The first render becomes the reference; afterwards the reference advances
    whenever the new candidate wins outright (not by a too-low default), which
    mirrors the halving planner's acceptance rule.
    """

    thresholds: OracleThresholds = field(default_factory=OracleThresholds)
    reference: Optional[OverplotMetrics] = None
    reference_ref: str = ""

    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput:
        metrics = overplot_from(view.stats)
        if self.reference is None:
            self.reference = metrics
            self.reference_ref = view.image_ref
            return PerceptionOutput(
                assessment=Assessment.answer_text("baseline"),
                reasoning=f"baseline render: saturated={metrics.saturated_fraction:.3f} faint={metrics.faintness:.3f}",
            )
        verdict = oracle_compare_scatter(metrics, self.reference, self.thresholds)
        cmp = verdict.comparison
        reasoning = (
            f"oracle: candidate saturated={metrics.saturated_fraction:.3f} faint={metrics.faintness:.3f} "
            f"vs current saturated={self.reference.saturated_fraction:.3f} faint={self.reference.faintness:.3f} "
            f"-> winner={cmp.winner}{' (too low)' if cmp.too_low else ''}"
        )
        if cmp.winner == FIRST and not cmp.too_low:
            self.reference = metrics
            self.reference_ref = view.image_ref
        return PerceptionOutput(assessment=verdict, reasoning=reasoning)


@dataclass
class LlmPerception:
    """Vision-LLM assessment of the current render with session context."""

    client: ChatClient
    context_window: int = 3
    image_budget: int = 4
    max_tokens: int = 1024

    def assess(self, view: RenderView, ctx: LoopContext) -> PerceptionOutput:
        role = render_role_prompt(ctx.session.config, {"goal": ctx.goal})
        lines = [f"Goal: {ctx.goal}", f"Current parameters: {dict(view.params)}"]
        metadata = getattr(ctx.descriptor, "metadata", None) or {}
        if metadata.get("modality"):
            lines.append(f"Acquisition modality: {metadata['modality']}")
        if metadata.get("histogram"):
            lines.append(f"Value histogram: {metadata['histogram']}")
        history = select_context(ctx.session, self.context_window) if ctx.session.records else []
        for rec in history:
            lines.append(
                f"Step {rec.step}: params={dict(rec.params)} assessment={rec.assessment.kind} plan={rec.plan}"
            )
        lines.append("The attached image is the latest render.")
        images = [view.png]
        for rec in history[-(self.image_budget - 1) :]:
            if len(images) >= self.image_budget:
                break
            if ctx.store.has_image(rec.image_ref) and rec.image_ref != view.image_ref:
                images.append(ctx.store.load_image(rec.image_ref))
        parsed = llm_assess(images[: self.image_budget], role, "\n".join(lines), self.client, self.max_tokens)
        return PerceptionOutput(
            assessment=label_to_assessment(parsed.assessment_label),
            reasoning=parsed.reasoning,
            parsed=parsed,
        )

    def usage(self) -> dict:
        """Accumulated token counts, persisted into the session for cost accounting."""
        return self.client.total_usage()
