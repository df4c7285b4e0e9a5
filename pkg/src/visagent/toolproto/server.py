"""HTTP adapter exposing a tool implementation on the wire protocol."""

from __future__ import annotations

import base64
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..errors import BindError, ProtocolError, VisAgentError
from ..params import ParamVector
from .descriptor import FIELD_IMAGE, FIELD_PARAMS, FIELD_STATS, FIELD_VERSION, PROTOCOL_VERSION


class ServerHandle:
    def __init__(self, server: ThreadingHTTPServer, thread: threading.Thread):
        self._server = server
        self._thread = thread
        self.address = server.server_address

    @property
    def url(self) -> str:
        host, port = self.address[0], self.address[1]
        return f"http://{host}:{port}"

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5.0)

    def __enter__(self) -> "ServerHandle":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _make_handler(tool):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):  # keep test output quiet
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, status: int, code: str, detail: str = "") -> None:
            self._send_json(status, {"error": {"code": code, "detail": detail}})

        def do_GET(self):
            if self.path.rstrip("/") == "/describe":
                self._send_json(200, tool.describe().to_dict())
            else:
                self._send_error(404, "not_found", self.path)

        def do_POST(self):
            if self.path.rstrip("/") != "/render":
                self._send_error(404, "not_found", self.path)
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, json.JSONDecodeError):
                self._send_error(400, "bad_request", "body must be JSON")
                return
            if not isinstance(payload, dict) or FIELD_PARAMS not in payload or not isinstance(
                payload[FIELD_PARAMS], dict
            ):
                self._send_error(400, "bad_request", f"body needs a {FIELD_PARAMS!r} object")
                return
            try:
                png, stats = tool.render(ParamVector(payload[FIELD_PARAMS]))
            except ProtocolError as exc:
                self._send_error(400, exc.code, str(exc))
                return
            except VisAgentError as exc:
                self._send_error(400, "invalid_params", str(exc))
                return
            self._send_json(
                200,
                {
                    FIELD_VERSION: PROTOCOL_VERSION,
                    FIELD_IMAGE: base64.b64encode(png).decode("ascii"),
                    FIELD_STATS: stats,
                },
            )

    return Handler


def serve_tool(tool, host: str = "127.0.0.1", port: int = 0) -> ServerHandle:
    """Serve GET /describe and POST /render for ``tool``; port 0 picks a free one."""
    try:
        server = ThreadingHTTPServer((host, port), _make_handler(tool))
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, name=f"tool-server-{server.server_address[1]}", daemon=True)
    thread.start()
    return ServerHandle(server, thread)
