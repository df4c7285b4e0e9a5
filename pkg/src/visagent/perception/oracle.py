"""Deterministic perception oracles over renderer side channels.

These replace vision-model judgments in tests and oracle-mode runs: the
volume oracle grades structure visibility from per-structure compositing
stats, the scatter oracle compares overplot metrics pairwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..charts.scatter import OverplotMetrics
from ..errors import UnknownStructure
from ..volren.render import StructureStats
from .assessment import FIRST, SECOND, Assessment


@dataclass(frozen=True)
class OracleThresholds:
    # volume recognizability gates
    t_clear: float = 0.7
    t_rec: float = 0.25
    c_min: float = 0.5
    # scatter: an image with faintness below this is "too low"
    t_faint: float = 0.1

    def to_dict(self) -> dict:
        return {"t_clear": self.t_clear, "t_rec": self.t_rec, "c_min": self.c_min, "t_faint": self.t_faint}

    @classmethod
    def from_dict(cls, d) -> "OracleThresholds":
        base = cls()
        return cls(
            t_clear=float(d.get("t_clear", base.t_clear)),
            t_rec=float(d.get("t_rec", base.t_rec)),
            c_min=float(d.get("c_min", base.c_min)),
            t_faint=float(d.get("t_faint", base.t_faint)),
        )


def oracle_assess_volume(
    stats: dict,
    target: str,
    thresholds: OracleThresholds = OracleThresholds(),
) -> Assessment:
    """Grade the target structure: clear / recognizable / not recognizable.

    The structure must both cover enough of its own silhouette (c_min) and
    dominate compositing where it shows (t_rec / t_clear).
    """
    if target not in stats:
        raise UnknownStructure(f"no stats for structure {target!r} (have {sorted(stats)})")
    s: StructureStats = stats[target]
    if s.silhouette_coverage >= thresholds.c_min:
        if s.mean_share >= thresholds.t_clear:
            return Assessment.clear()
        if s.mean_share >= thresholds.t_rec:
            return Assessment.recognizable()
    return Assessment.not_recognizable()


def oracle_compare_scatter(
    a: OverplotMetrics,
    b: OverplotMetrics,
    thresholds: OracleThresholds = OracleThresholds(),
) -> Assessment:
    """Decide which of two scatterplots handles overplotting better.

    A candidate whose faintness falls below t_faint is "too low" (single
    points fade out). Among viable candidates the strictly lower saturated
    fraction wins; if both are too low the strictly fainter one loses. Exact
    ties go to the first image, which lets a bracket search keep descending.
    """
    a_low = a.faintness < thresholds.t_faint
    b_low = b.faintness < thresholds.t_faint

    if a_low != b_low:
        return Assessment.compare(winner=SECOND if a_low else FIRST, too_low=True)
    if a_low and b_low:
        return Assessment.compare(winner=SECOND if b.faintness > a.faintness else FIRST, too_low=True)
    return Assessment.compare(
        winner=SECOND if b.saturated_fraction < a.saturated_fraction else FIRST, too_low=False
    )
