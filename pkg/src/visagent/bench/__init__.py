from .cases import ALL_TASKS, BenchCase, gen_case
from .phantom import PhantomSpec, PhantomStructure, band_phantom, gen_volume_phantom, nested_phantom
from .runner import (
    BenchReport,
    FixedAnswerStub,
    GroundTruthStub,
    LlmBenchPerception,
    TaskResult,
    format_graph_table,
    format_report,
    format_scatter_pc_table,
    run_all,
    run_benchmark,
    score_case,
)

__all__ = [
    "ALL_TASKS",
    "BenchCase",
    "BenchReport",
    "FixedAnswerStub",
    "GroundTruthStub",
    "LlmBenchPerception",
    "PhantomSpec",
    "PhantomStructure",
    "TaskResult",
    "band_phantom",
    "format_graph_table",
    "format_report",
    "format_scatter_pc_table",
    "gen_case",
    "gen_volume_phantom",
    "nested_phantom",
    "run_all",
    "run_benchmark",
    "score_case",
]
