"""Role prompt templating for agent initialization."""

from __future__ import annotations

import re
from typing import Mapping

from .config import AgentConfig
from .errors import MissingField
from .responses import FORMAT_INSTRUCTIONS

ROLE_TEMPLATE = (
    "You are an autonomous visualization agent tasked with assisting a user in "
    "{visualization task}. In each step, you will receive a screenshot and you "
    "will assess the image and provide the {approach}. Your goal is to determine "
    "{goal}. Achieve this goal by {approach}"
)

CONSTRAINTS_CLAUSE = ", adhering to the following constraints: {constraints}"

_PLACEHOLDER_RE = re.compile(r"\{([^{}]+)\}")


def _substitute(template: str, bindings: Mapping) -> str:
    def repl(match):
        name = match.group(1).strip()
        if name not in bindings:
            raise MissingField(name)
        return str(bindings[name])

    return _PLACEHOLDER_RE.sub(repl, template)


def render_role_prompt(config: AgentConfig, fields: Mapping | None = None) -> str:
    """Fill the agent-initialization template from the config.

    ``fields`` binds any extra placeholders used inside the config's own
    goal/approach/task texts; unresolved placeholders raise MissingField. The
    constraints clause is omitted when there are no constraints, and the
    response-format instructions are appended so replies stay parseable.
    """
    fields = dict(fields or {})
    goal = _substitute(config.goal_template, fields)
    approach = _substitute(config.approach, fields)
    task = _substitute(config.task, fields)

    template = ROLE_TEMPLATE
    bindings = {"visualization task": task, "approach": approach, "goal": goal}
    if config.constraints:
        template += CONSTRAINTS_CLAUSE
        bindings["constraints"] = ", ".join(config.constraints)
    prompt = _substitute(template, bindings)
    return prompt + "\n\n" + FORMAT_INSTRUCTIONS
