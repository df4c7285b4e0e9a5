"""Client side of the tool wire protocol."""

from __future__ import annotations

import base64

import requests

from ..errors import ProtocolError, ToolUnreachable
from ..imaging import from_png
from ..params import ParamVector
from .descriptor import FIELD_IMAGE, FIELD_PARAMS, FIELD_STATS, ToolDescriptor

DEFAULT_TIMEOUT_S = 30.0


def _raise_for_error(resp) -> None:
    try:
        payload = resp.json()
    except ValueError:
        raise ProtocolError("bad_response", f"status {resp.status_code} with non-JSON body")
    err = payload.get("error") or {}
    raise ProtocolError(err.get("code", "http_error"), err.get("detail", f"status {resp.status_code}"))


def describe_tool(endpoint: str, timeout: float = DEFAULT_TIMEOUT_S) -> ToolDescriptor:
    url = endpoint.rstrip("/") + "/describe"
    try:
        resp = requests.get(url, timeout=timeout)
    except requests.RequestException as exc:
        raise ToolUnreachable(f"cannot reach {url}: {exc}") from exc
    if resp.status_code != 200:
        _raise_for_error(resp)
    try:
        return ToolDescriptor.from_dict(resp.json())
    except (ValueError, KeyError) as exc:
        raise ProtocolError("bad_descriptor", str(exc)) from exc


def client_render(endpoint: str, params: ParamVector, timeout: float = DEFAULT_TIMEOUT_S):
    """POST the params and decode the PNG; one retry on transport failure."""
    url = endpoint.rstrip("/") + "/render"
    body = {FIELD_PARAMS: params.to_dict()}
    resp = None
    last_exc = None
    for _ in range(2):
        try:
            resp = requests.post(url, json=body, timeout=timeout)
            break
        except requests.RequestException as exc:
            last_exc = exc
    if resp is None:
        raise ToolUnreachable(f"cannot reach {url}: {last_exc}") from last_exc
    if resp.status_code != 200:
        _raise_for_error(resp)
    try:
        payload = resp.json()
    except ValueError as exc:
        raise ProtocolError("bad_response", "render response is not JSON") from exc
    if FIELD_IMAGE not in payload:
        raise ProtocolError("bad_response", f"render response missing {FIELD_IMAGE!r}")
    try:
        png = base64.b64decode(payload[FIELD_IMAGE], validate=True)
        from_png(png)  # decode to verify the payload is a whole PNG
    except Exception as exc:
        raise ProtocolError("bad_image", f"image payload does not decode: {exc}") from exc
    return png, payload.get(FIELD_STATS)


class RemoteTool:
    """Loop-facing handle for a tool served over the wire protocol."""

    def __init__(self, endpoint: str, timeout: float = DEFAULT_TIMEOUT_S):
        self.endpoint = endpoint
        self.timeout = timeout
        self._descriptor = None

    def describe(self) -> ToolDescriptor:
        if self._descriptor is None:
            self._descriptor = describe_tool(self.endpoint, self.timeout)
        return self._descriptor

    def render(self, params: ParamVector):
        return client_render(self.endpoint, params, self.timeout)
