"""Structured agent responses: tagged REASONING / PLAN / ASSESSMENT / PARAMS
sections and their parser. The tags are injected into prompts as a formatting
constraint so responses stay machine-checkable."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from .errors import MissingAssessment

TAGS = ("REASONING", "PLAN", "ASSESSMENT", "PARAMS")
_TAG_RE = re.compile(r"^[ \t]*(REASONING|PLAN|ASSESSMENT|PARAMS)[ \t]*:", re.IGNORECASE | re.MULTILINE)
_KV_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^,;\s]+)")

FORMAT_INSTRUCTIONS = (
    "Respond with exactly these tagged sections:\n"
    "REASONING: <what you observe and why it matters>\n"
    "PLAN: <what you will try next>\n"
    "ASSESSMENT: <your verdict label>\n"
    "PARAMS: <JSON object of proposed parameter values, omit if none>"
)


@dataclass(frozen=True)
class ParsedResponse:
    reasoning: str
    plan: str
    assessment_label: str
    proposed_params: Optional[dict] = None

    def __post_init__(self):
        if not self.assessment_label:
            raise MissingAssessment("assessment label must be non-empty")


def parse_agent_response(text: str) -> ParsedResponse:
    """Extract the tagged sections from a model response.

    Tags are case-insensitive and may appear in any order; each section runs
    until the next tag. PARAMS accepts a JSON object or comma-separated
    key=value pairs. REASONING/PLAN default to empty, missing PARAMS means no
    proposal; a missing ASSESSMENT is an error.
    """
    sections: dict = {}
    matches = list(_TAG_RE.finditer(text))
    for i, m in enumerate(matches):
        tag = m.group(1).upper()
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        body = text[m.end() : end].strip()
        if tag not in sections:
            sections[tag] = body

    if "ASSESSMENT" not in sections or not sections["ASSESSMENT"]:
        raise MissingAssessment("response has no ASSESSMENT section")

    params = None
    raw = sections.get("PARAMS", "")
    if raw:
        params = _parse_params(raw)

    return ParsedResponse(
        reasoning=sections.get("REASONING", ""),
        plan=sections.get("PLAN", ""),
        assessment_label=sections["ASSESSMENT"],
        proposed_params=params,
    )


def _parse_params(raw: str) -> Optional[dict]:
    try:
        obj = json.loads(raw)
        if isinstance(obj, dict):
            return obj
    except json.JSONDecodeError:
        pass
    pairs = {}
    for m in _KV_RE.finditer(raw):
        key, val = m.group(1), m.group(2)
        try:
            pairs[key] = json.loads(val)
        except json.JSONDecodeError:
            pairs[key] = val
    return pairs or None


def format_agent_response(parsed: ParsedResponse) -> str:
    """Serialize a ParsedResponse back into the tagged wire form; parsing the
    result recovers the original (the framework's own formatter contract)."""
    lines = [
        f"REASONING: {parsed.reasoning}",
        f"PLAN: {parsed.plan}",
        f"ASSESSMENT: {parsed.assessment_label}",
    ]
    if parsed.proposed_params is not None:
        lines.append(f"PARAMS: {json.dumps(parsed.proposed_params, sort_keys=True)}")
    return "\n".join(lines)
