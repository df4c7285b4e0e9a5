from ..charts.scatter import OverplotMetrics
from ..volren.render import StructureStats
from .assessment import Assessment, Comparison
from .llm import ChatClient, ChatRequest, ChatResponse, Message, llm_assess
from .oracle import OracleThresholds, oracle_assess_volume, oracle_compare_scatter

__all__ = [
    "Assessment",
    "ChatClient",
    "ChatRequest",
    "ChatResponse",
    "Comparison",
    "Message",
    "OracleThresholds",
    "OverplotMetrics",
    "StructureStats",
    "llm_assess",
    "oracle_assess_volume",
    "oracle_compare_scatter",
]
