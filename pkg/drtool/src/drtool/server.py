"""Wire-protocol server: /describe and /render over the loaded dataset.

Embeddings are expensive, so renders run one at a time behind a lock, and
each (params, seed) result is cached so repeated requests are cheap and
byte-identical.
"""

from __future__ import annotations

import base64
import csv
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .embed import N_NEIGHBORS_BOUNDS, PERPLEXITY_BOUNDS, embed
from .render import render_embedding

PROTOCOL_VERSION = 1
SEED_BOUNDS = (0, 1_000_000)


def load_dataset(path: str, label_column: str | None = None):
    """Numeric feature matrix from a headed CSV; the label column (when
    named) is withheld from everything that crosses the wire."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: need a header row plus data")
    header, body = rows[0], rows[1:]
    drop = {header.index(label_column)} if label_column and label_column in header else set()
    keep = [i for i in range(len(header)) if i not in drop]
    data = np.array([[float(r[i]) for i in keep] for r in body], dtype=np.float64)
    return data


class DrTool:
    def __init__(self, data: np.ndarray, method: str = "umap", name: str = "dr-tool"):
        if method not in ("tsne", "umap"):
            raise ValueError(f"method must be tsne or umap, got {method!r}")
        self.data = data
        self.method = method
        self.name = name
        self._lock = threading.Lock()  # one embedding at a time
        self._cache: dict = {}

    @property
    def param_entry(self) -> dict:
        if self.method == "tsne":
            lo, hi = PERPLEXITY_BOUNDS
            return {"name": "perplexity", "kind": "continuous", "lower": lo, "upper": hi}
        lo, hi = N_NEIGHBORS_BOUNDS
        return {"name": "n_neighbors", "kind": "integer", "lower": lo, "upper": hi}

    def describe(self) -> dict:
        entry = self.param_entry
        default = 30.0 if self.method == "tsne" else 15
        return {
            "ava_proto": PROTOCOL_VERSION,
            "name": self.name,
            "param_space": [
                entry,
                {"name": "seed", "kind": "integer", "lower": SEED_BOUNDS[0], "upper": SEED_BOUNDS[1]},
            ],
            "metadata": {
                "kind": "dimensionality-reduction",
                "method": self.method,
                "rows": int(len(self.data)),
                "columns": int(self.data.shape[1]),
                "stats_kind": "separation",
                "default_params": {entry["name"]: default, "seed": 0},
                "quality_rubric": (
                    "judge the embedding by cluster separation and compactness: "
                    "distinct, well-spaced groups beat stringy or merged ones"
                ),
            },
        }

    def validate(self, params: dict) -> tuple:
        entry = self.param_entry
        name = entry["name"]
        if name not in params:
            raise ParamError(f"missing parameter {name!r}")
        value = params[name]
        if not isinstance(value, (int, float)) or not entry["lower"] <= value <= entry["upper"]:
            raise ParamError(f"{name}={value!r} outside [{entry['lower']}, {entry['upper']}]")
        if entry["kind"] == "integer" and float(value) != int(value):
            raise ParamError(f"{name} must be an integer")
        seed = params.get("seed", 0)
        if not isinstance(seed, (int, float)) or float(seed) != int(seed) or not SEED_BOUNDS[0] <= seed <= SEED_BOUNDS[1]:
            raise ParamError(f"seed={seed!r} outside {SEED_BOUNDS}")
        unknown = set(params) - {name, "seed"}
        if unknown:
            raise ParamError(f"unknown parameter(s) {sorted(unknown)}")
        return float(value), int(seed)

    def render(self, params: dict) -> dict:
        value, seed = self.validate(params)
        key = (value, seed)
        with self._lock:
            if key not in self._cache:
                coords = embed(self.data, self.method, value, seed)
                png = render_embedding(coords)
                self._cache[key] = {
                    "ava_proto": PROTOCOL_VERSION,
                    "image": base64.b64encode(png).decode("ascii"),
                    "stats": {
                        "separation": _separation_score(coords),
                        "points": [[round(float(x), 6), round(float(y), 6)] for x, y in coords],
                    },
                }
            return self._cache[key]


class ParamError(ValueError):
    pass


def _separation_score(coords: np.ndarray) -> float:
    """Label-free spread proxy: ratio of global spread to local crowding."""
    pts = np.asarray(coords, dtype=np.float64)
    centered = pts - pts.mean(axis=0)
    global_spread = float(np.sqrt((centered**2).sum(axis=1).mean()))
    if len(pts) < 3 or global_spread == 0.0:
        return 0.0
    from sklearn.neighbors import NearestNeighbors

    nn = NearestNeighbors(n_neighbors=2).fit(pts)
    d, _ = nn.kneighbors(pts)
    local = float(np.median(d[:, 1]))
    return round(global_spread / (global_spread + 20.0 * local + 1e-12), 6)


def _make_handler(tool: DrTool):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *a):
            pass

        def _json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _error(self, status: int, code: str, detail: str = "") -> None:
            self._json(status, {"error": {"code": code, "detail": detail}})

        def do_GET(self):
            if self.path.rstrip("/") == "/describe":
                self._json(200, tool.describe())
            else:
                self._error(404, "not_found", self.path)

        def do_POST(self):
            if self.path.rstrip("/") != "/render":
                self._error(404, "not_found", self.path)
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, json.JSONDecodeError):
                self._error(400, "bad_request", "body must be JSON")
                return
            if not isinstance(payload, dict) or not isinstance(payload.get("params"), dict):
                self._error(400, "bad_request", "body needs a 'params' object")
                return
            try:
                self._json(200, tool.render(payload["params"]))
            except ParamError as exc:
                self._error(400, "param_out_of_bounds", str(exc))

    return Handler


def serve_dr(dataset_path: str, host: str = "127.0.0.1", port: int = 0,
             method: str = "umap", label_column: str | None = None):
    data = load_dataset(dataset_path, label_column)
    tool = DrTool(data, method=method)
    server = ThreadingHTTPServer((host, port), _make_handler(tool))
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
