"""HTTP front of the session service: REST + server-sent events + static UI."""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from ..errors import BindError, ConfigError, ToolUnreachable, VisAgentError
from ..memory import SessionStore
from .manager import InvalidTransition, SessionManager, UnknownSession

_SESSION_RE = re.compile(r"^/sessions/([0-9a-f]+)(/events|/control)?$")
_IMAGE_RE = re.compile(r"^/images/([0-9a-f]{64})$")


class ServiceHandle:
    def __init__(self, server, thread, manager):
        self._server = server
        self._thread = thread
        self.manager = manager
        self.address = server.server_address

    @property
    def url(self) -> str:
        return f"http://{self.address[0]}:{self.address[1]}"

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5.0)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _make_handler(manager: SessionManager, store: SessionStore, static_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *a):
            pass

        def _json(self, status: int, payload) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _error(self, status: int, code: str, detail: str = "") -> None:
            self._json(status, {"error": {"code": code, "detail": detail}})

        def _read_body(self):
            length = int(self.headers.get("Content-Length", "0"))
            return json.loads(self.rfile.read(length).decode("utf-8")) if length else {}

        # ---- GET ----

        def do_GET(self):
            path = self.path.split("?", 1)[0]
            m = _IMAGE_RE.match(path)
            if m:
                return self._serve_image(m.group(1))
            m = _SESSION_RE.match(path)
            if m and m.group(2) == "/events":
                return self._serve_events(m.group(1))
            if m and m.group(2) is None:
                return self._serve_session(m.group(1))
            if path == "/sessions":
                ids = store.list_ids()
                return self._json(200, {"sessions": [store.load(i).to_dict() | {"records": []} for i in ids]})
            return self._serve_static(path)

        def _serve_session(self, session_id: str) -> None:
            if not store.exists(session_id):
                return self._error(404, "unknown_session", session_id)
            self._json(200, store.load(session_id).to_dict())

        def _serve_image(self, ref: str) -> None:
            if not store.has_image(ref):
                return self._error(404, "unknown_image", ref)
            png = store.load_image(ref)
            self.send_response(200)
            self.send_header("Content-Type", "image/png")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Content-Length", str(len(png)))
            self.end_headers()
            self.wfile.write(png)

        def _serve_events(self, session_id: str) -> None:
            try:
                manager.entry_for(session_id)  # 404 before the stream starts
            except UnknownSession:
                return self._error(404, "unknown_session", session_id)
            events = manager.subscribe(session_id)
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Connection", "close")  # EOF marks the stream end
            self.end_headers()
            try:
                for event in events:
                    chunk = (
                        f"id: {event['seq']}\n"
                        f"event: {event['event']}\n"
                        f"data: {json.dumps(event['data'])}\n\n"
                    )
                    self.wfile.write(chunk.encode("utf-8"))
                    self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError):
                return
            finally:
                self.close_connection = True

        def _serve_static(self, path: str) -> None:
            if static_dir is None:
                return self._error(404, "not_found", path)
            rel = "index.html" if path in ("/", "") else path.lstrip("/")
            target = (static_dir / rel).resolve()
            if not str(target).startswith(str(static_dir.resolve())) or not target.is_file():
                return self._error(404, "not_found", path)
            data = target.read_bytes()
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        # ---- POST ----

        def do_POST(self):
            path = self.path.split("?", 1)[0]
            try:
                body = self._read_body()
            except (ValueError, json.JSONDecodeError):
                return self._error(400, "bad_request", "body must be JSON")

            if path == "/sessions":
                return self._create_session(body)
            m = _SESSION_RE.match(path)
            if m and m.group(2) == "/control":
                return self._control(m.group(1), body)
            return self._error(404, "not_found", path)

        def _create_session(self, body) -> None:
            try:
                session_id = manager.create_session(
                    config_dict=body.get("config", {}),
                    goal=body.get("goal", ""),
                    tool_spec=body.get("tool", {}),
                    perception_spec=body.get("perception"),
                )
            except ConfigError as exc:
                return self._error(422, "invalid_config", str(exc))
            except ToolUnreachable as exc:
                return self._error(502, "tool_unreachable", str(exc))
            except VisAgentError as exc:
                return self._error(422, "invalid_request", str(exc))
            self._json(201, {"id": session_id})

        def _control(self, session_id: str, body) -> None:
            try:
                status = manager.control(session_id, body)
            except UnknownSession:
                return self._error(404, "unknown_session", session_id)
            except InvalidTransition as exc:
                return self._error(409, "invalid_transition", str(exc))
            except ConfigError as exc:
                return self._error(422, "invalid_command", str(exc))
            self._json(200, {"status": status})

    return Handler


def serve_app(
    data_dir,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir=None,
) -> ServiceHandle:
    store = SessionStore(data_dir)
    manager = SessionManager(store)
    static = Path(static_dir) if static_dir else None
    try:
        server = ThreadingHTTPServer((host, port), _make_handler(manager, store, static))
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, name="session-service", daemon=True)
    thread.start()
    return ServiceHandle(server, thread, manager)
