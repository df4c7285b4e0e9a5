"""Benchmark runner: seeded cases, answer scoring, success-rate tables."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import VisAgentError
from ..imaging import content_hash
from .cases import (
    TASK_GRAPH_CONNECTION,
    TASK_GRAPH_FIND_NODE,
    TASK_GRAPH_NEIGHBOR,
    TASK_GRAPH_NODE_COUNT,
    TASK_PC_CLUSTER_COUNT,
    TASK_PC_CORRELATION,
    TASK_PC_OUTLIER_COUNT,
    TASK_SCATTER_CLUSTER,
    TASK_SCATTER_CLUSTER_COUNT,
    TASK_SCATTER_CORRELATION,
    TASK_SCATTER_OUTLIER,
    TASK_SCATTER_OUTLIER_COUNT,
    TASK_VOLUME_RECOGNIZABLE,
    BenchCase,
    gen_case,
)

_INT_RE = re.compile(r"[-+]?\d+")
_NODE_RE = re.compile(r"\b([A-Z])\b")

# both-coefficients-low leniency applies only to the scatter correlation task
CORRELATION_LENIENCY_MAX = 0.2


def extract_count(answer: str):
    """First integer token in the answer, or None."""
    m = _INT_RE.search(answer)
    return int(m.group(0)) if m else None


def extract_yes_no(answer: str):
    low = answer.strip().lower()
    if re.search(r"\b(yes|true|recognizable)\b", low) and not re.search(r"\bnot recognizable\b", low):
        return True
    if re.search(r"\b(no|false|none)\b", low) or re.search(r"\bnot recognizable\b", low):
        return False
    return None


def extract_choice(answer: str):
    low = answer.lower()
    if "both" in low and "low" in low:
        return "both_low"
    if "first" in low or "left" in low:
        return "first"
    if "second" in low or "right" in low:
        return "second"
    return None


def extract_node_set(answer: str) -> frozenset:
    return frozenset(_NODE_RE.findall(answer))


def score_case(case: BenchCase, answer: str) -> bool:
    """Pure scoring of one answer against the recorded ground truth."""
    task = case.task
    if task in (TASK_SCATTER_CLUSTER_COUNT, TASK_SCATTER_OUTLIER_COUNT, TASK_PC_CLUSTER_COUNT,
                TASK_PC_OUTLIER_COUNT, TASK_GRAPH_NODE_COUNT):
        return extract_count(answer) == case.ground_truth
    if task in (TASK_SCATTER_CLUSTER, TASK_SCATTER_OUTLIER, TASK_PC_CORRELATION,
                TASK_GRAPH_FIND_NODE, TASK_GRAPH_CONNECTION, TASK_VOLUME_RECOGNIZABLE):
        return extract_yes_no(answer) == case.ground_truth
    if task == TASK_SCATTER_CORRELATION:
        choice = extract_choice(answer)
        if choice == case.ground_truth:
            return True
        both_low = (
            case.detail.get("rho_first", 1.0) <= CORRELATION_LENIENCY_MAX
            and case.detail.get("rho_second", 1.0) <= CORRELATION_LENIENCY_MAX
        )
        return both_low and choice == "both_low"
    if task == TASK_GRAPH_NEIGHBOR:
        return extract_node_set(answer) == case.ground_truth
    raise VisAgentError(f"no scorer for task {task!r}")


class GroundTruthStub:
    """Answers every case perfectly by reading its recorded ground truth."""

    def answer(self, case: BenchCase) -> str:
        truth = case.ground_truth
        if isinstance(truth, bool):
            return "yes" if truth else "no"
        if isinstance(truth, int):
            return str(truth)
        if isinstance(truth, frozenset):
            return ", ".join(sorted(truth)) if truth else "it has no neighbors"
        return str(truth)


class FixedAnswerStub:
    """Always gives the same answer; useful for scoring sanity checks."""

    def __init__(self, text: str):
        self.text = text

    def answer(self, case: BenchCase) -> str:
        return self.text


class LlmBenchPerception:
    """Sends the case prompt plus image to a chat endpoint."""

    def __init__(self, client, max_tokens: int = 256):
        self.client = client
        self.max_tokens = max_tokens

    def answer(self, case: BenchCase) -> str:
        from ..perception.llm import ChatRequest, Message

        request = ChatRequest(
            messages=(Message(role="user", text=case.prompt, images=(case.image_png,)),),
            max_tokens=self.max_tokens,
        )
        return self.client.chat_complete(request).text


@dataclass
class TaskResult:
    task: str
    trials: int
    successes: int
    transcripts: list = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "transcripts": list(self.transcripts),
        }


@dataclass
class BenchReport:
    results: dict = field(default_factory=dict)  # task -> TaskResult

    def add(self, result: TaskResult) -> None:
        self.results[result.task] = result

    def rate(self, task: str):
        r = self.results.get(task)
        return r.success_rate if r else None

    def to_dict(self) -> dict:
        return {task: r.to_dict() for task, r in sorted(self.results.items())}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def run_benchmark(task: str, trials: int, perception, *, seed0: int = 0, params: dict | None = None) -> TaskResult:
    """Run ``trials`` seeded cases of one task; perception errors count as
    failed trials and are recorded in the transcript."""
    if trials < 1:
        raise VisAgentError(f"trials must be >= 1, got {trials}")
    result = TaskResult(task=task, trials=trials, successes=0)
    for i in range(trials):
        case = gen_case(task, seed0 + i, params)
        entry = {"seed": case.seed, "prompt": case.prompt, "image_hash": content_hash(case.image_png)}
        try:
            answer = perception.answer(case)
            ok = score_case(case, answer)
            entry.update({"answer": answer, "correct": bool(ok)})
        except VisAgentError as exc:
            ok = False
            entry.update({"error": str(exc), "correct": False})
        if ok:
            result.successes += 1
        result.transcripts.append(entry)
    return result


def run_all(tasks, trials: int, perception, *, seed0: int = 0) -> BenchReport:
    report = BenchReport()
    for task in tasks:
        report.add(run_benchmark(task, trials, perception, seed0=seed0))
    return report


def _pct(rate) -> str:
    return f"{round(rate * 100):d}%" if rate is not None else "-"


def format_scatter_pc_table(rates: dict) -> str:
    """Success-rate table: scatter plot and parallel coordinates columns."""
    rows = [
        ("cluster", rates.get(TASK_SCATTER_CLUSTER), None),
        ("cluster count", rates.get(TASK_SCATTER_CLUSTER_COUNT), rates.get(TASK_PC_CLUSTER_COUNT)),
        ("outlier", rates.get(TASK_SCATTER_OUTLIER), None),
        ("outlier count", rates.get(TASK_SCATTER_OUTLIER_COUNT), rates.get(TASK_PC_OUTLIER_COUNT)),
        ("correlation", rates.get(TASK_SCATTER_CORRELATION), rates.get(TASK_PC_CORRELATION)),
    ]
    header = f"{'task':<14} {'scatter plot':>14} {'parallel coordinates':>22}"
    lines = [header, "-" * len(header)]
    for name, s_rate, p_rate in rows:
        lines.append(f"{name:<14} {_pct(s_rate):>14} {_pct(p_rate):>22}")
    return "\n".join(lines)


def format_graph_table(rates: dict) -> str:
    """Success-rate table for the graph tasks."""
    cols = [
        ("node count", rates.get(TASK_GRAPH_NODE_COUNT)),
        ("find node", rates.get(TASK_GRAPH_FIND_NODE)),
        ("connection", rates.get(TASK_GRAPH_CONNECTION)),
        ("neighbor", rates.get(TASK_GRAPH_NEIGHBOR)),
    ]
    header = " ".join(f"{name:>12}" for name, _ in cols)
    values = " ".join(f"{_pct(rate):>12}" for _, rate in cols)
    return header + "\n" + values


def format_report(report: BenchReport) -> str:
    rates = {task: r.success_rate for task, r in report.results.items()}
    parts = []
    if any(t in rates for t in (TASK_SCATTER_CLUSTER, TASK_SCATTER_CLUSTER_COUNT, TASK_PC_CLUSTER_COUNT,
                                TASK_SCATTER_OUTLIER, TASK_SCATTER_OUTLIER_COUNT, TASK_PC_OUTLIER_COUNT,
                                TASK_SCATTER_CORRELATION, TASK_PC_CORRELATION)):
        parts.append(format_scatter_pc_table(rates))
    if any(t.startswith("graph_") for t in rates):
        parts.append(format_graph_table(rates))
    if TASK_VOLUME_RECOGNIZABLE in rates:
        parts.append(f"volume recognizable: {_pct(rates[TASK_VOLUME_RECOGNIZABLE])}")
    return "\n\n".join(parts) if parts else "(empty report)"
