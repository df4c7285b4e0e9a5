"""Protocol conformance checks runnable against any tool endpoint.

Used by the built-in tools' own tests and by external tools (the reference
dimensionality-reduction server) to prove wire compatibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import requests

from ..errors import ProtocolError
from ..params import ParamVector
from .client import client_render, describe_tool
from .descriptor import ToolDescriptor


@dataclass
class ConformanceReport:
    endpoint: str
    checks: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"name": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def summary(self) -> str:
        lines = [f"conformance against {self.endpoint}:"]
        for c in self.checks:
            status = "PASS" if c["ok"] else "FAIL"
            lines.append(f"  [{status}] {c['name']}" + (f" ({c['detail']})" if c["detail"] else ""))
        return "\n".join(lines)


def _default_params(descriptor: ToolDescriptor) -> ParamVector:
    values = {}
    for e in descriptor.param_space.entries:
        if e.kind == "categorical":
            values[e.name] = e.choices[0]
        elif e.kind == "integer":
            values[e.name] = int(round((e.lower + e.upper) / 2.0))
        else:
            values[e.name] = (e.lower + e.upper) / 2.0
    return ParamVector(values)


def check_conformance(endpoint: str, params: ParamVector | None = None, timeout: float = 60.0) -> ConformanceReport:
    """Descriptor round-trip, render determinism, and error-code behavior."""
    report = ConformanceReport(endpoint=endpoint)

    descriptor = describe_tool(endpoint, timeout=timeout)
    round_tripped = ToolDescriptor.from_dict(descriptor.to_dict())
    report.record("describe round-trips", round_tripped == descriptor)

    if params is None:
        params = _default_params(descriptor)
    png1, stats1 = client_render(endpoint, params, timeout=timeout)
    png2, stats2 = client_render(endpoint, params, timeout=timeout)
    report.record("render determinism (image bytes)", png1 == png2)
    report.record("render determinism (stats)", stats1 == stats2)

    numeric = [e for e in descriptor.param_space.entries if e.kind in ("continuous", "integer")]
    if numeric:
        bad = params.merged({numeric[0].name: numeric[0].upper + abs(numeric[0].upper) + 1e6})
        try:
            client_render(endpoint, bad, timeout=timeout)
            report.record("out-of-bounds rejected", False, "server accepted an out-of-bounds value")
        except ProtocolError as exc:
            report.record("out-of-bounds rejected", exc.code == "param_out_of_bounds", f"code={exc.code}")

    try:
        resp = requests.post(endpoint.rstrip("/") + "/render", data=b"not json", timeout=timeout)
        ok = resp.status_code == 400 and "code" in (resp.json().get("error") or {})
        report.record("malformed body gets 400 + error code", ok, f"status={resp.status_code}")
    except requests.RequestException as exc:
        report.record("malformed body gets 400 + error code", False, str(exc))

    return report
