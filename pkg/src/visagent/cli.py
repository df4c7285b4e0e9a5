"""Command line entry points: agent runs, one-shot renders, benchmarks, serving."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import threading
from pathlib import Path

from .bench import ALL_TASKS, GroundTruthStub, LlmBenchPerception, format_report, run_all
from .config import AgentConfig
from .errors import VisAgentError
from .factory import make_perception, make_tool
from .loop import run_loop
from .memory import STATUS_DONE_SUCCESS, SessionStore
from .planners import build_planner

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2

ENV_DATA_DIR = "VISAGENT_DATA_DIR"


def _tool_spec_from_args(args) -> dict:
    spec_text = args.tool
    if spec_text.startswith("http://") or spec_text.startswith("https://"):
        return {"endpoint": spec_text}
    if spec_text.startswith("builtin:"):
        name = spec_text.split(":", 1)[1]
        spec = {"builtin": name}
        if getattr(args, "data", None):
            key = "csv" if name == "scatter" else "data"
            spec[key] = args.data
        for opt in ("x", "y", "label"):
            value = getattr(args, opt, None)
            if value:
                spec[opt] = value
        if getattr(args, "seed", None) is not None:
            spec["seed"] = args.seed
        if getattr(args, "band", None):
            spec["band"] = [float(v) for v in args.band]
        if getattr(args, "image_size", None):
            spec["image_size"] = [int(v) for v in args.image_size]
        return spec
    raise VisAgentError(f"unrecognized tool spec {spec_text!r} (use builtin:<name> or an http endpoint)")


def _deterministic_session_id(config: AgentConfig, goal: str, tool_spec: dict, seed) -> str:
    payload = json.dumps(
        {"config": config.to_dict(), "goal": goal, "tool": tool_spec, "seed": seed}, sort_keys=True
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


def _counter_clock():
    ticks = iter(range(10**9))
    return lambda: next(ticks)


def cmd_run(args) -> int:
    config = AgentConfig.from_json_file(args.config)
    overrides = {}
    if args.max_iterations is not None:
        overrides["max_iterations"] = args.max_iterations
    if args.planner:
        overrides["planner_kind"] = args.planner
    if args.target:
        overrides.setdefault("perception_params", dict(config.perception_params))["target"] = args.target
    if overrides:
        d = config.to_dict()
        d.update(overrides)
        config = AgentConfig.from_dict(d)

    tool_spec = _tool_spec_from_args(args)
    tool = make_tool(tool_spec)
    descriptor = tool.describe()
    perception_kind = args.perception or config.perception_kind
    perception = make_perception(config, descriptor, perception_kind)
    planner = build_planner(config, descriptor)

    store = SessionStore(args.store)
    oracle_mode = perception_kind != "llm"
    # oracle runs are contractually reproducible: pin the clock and the id
    clock = _counter_clock() if (oracle_mode and not args.wall_clock) else None
    session_id = args.session_id or (
        _deterministic_session_id(config, args.goal, tool_spec, args.seed) if oracle_mode else None
    )

    session = run_loop(
        config, args.goal, tool, perception, planner,
        store=store, session_id=session_id, clock=clock,
    )
    path = store.session_path(session.id)
    print(f"session {session.id}: {session.status}")
    if session.final_params is not None:
        print(f"final params: {json.dumps(session.final_params.to_dict(), sort_keys=True)}")
    print(f"session file: {path}")
    return EXIT_OK if session.status == STATUS_DONE_SUCCESS else EXIT_DOMAIN_ERROR


def cmd_render(args) -> int:
    from .imaging import to_png

    if args.kind == "volume":
        from .volren import TriangularTF, default_camera, render_volume
        from .volren.dataset import load_with_sidecar

        volume = load_with_sidecar(args.data)
        tf = TriangularTF(start=args.start, end=args.end, peak_opacity=args.peak)
        camera = default_camera(volume.extent, tuple(args.image_size))
        result = render_volume(volume, tf, camera)
        Path(args.out).write_bytes(to_png(result.image))
    elif args.kind == "scatter":
        from .charts import load_points_csv, render_scatter

        points = load_points_csv(args.data, args.x, args.y, args.label or None)
        image, _ = render_scatter(points, opacity=args.opacity)
        Path(args.out).write_bytes(to_png(image))
    elif args.kind == "parallel":
        from .charts import load_rows_csv, render_parallel_coords

        rows = load_rows_csv(args.data)
        Path(args.out).write_bytes(to_png(render_parallel_coords(rows)))
    else:
        raise VisAgentError(f"unknown render kind {args.kind!r}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    tasks = [t.replace("-", "_") for t in (args.task or [])] or list(ALL_TASKS)
    for task in tasks:
        if task not in ALL_TASKS:
            raise VisAgentError(f"unknown benchmark task {task!r}")
    if args.perception == "stub:exact":
        perception = GroundTruthStub()
    elif args.perception == "llm":
        from .perception.llm import ChatClient

        perception = LlmBenchPerception(ChatClient())
    else:
        raise VisAgentError(f"bench perception must be stub:exact or llm, got {args.perception!r}")

    report = run_all(tasks, trials=args.trials, perception=perception, seed0=args.seed0)
    text = format_report(report)
    print(text)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
        print(f"report written to {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve_app

    data_dir = args.data_dir or os.environ.get(ENV_DATA_DIR, "./visagent-data")
    handle = serve_app(data_dir, host=args.host, port=args.port, static_dir=args.static)
    print(f"session service on {handle.url} (data: {data_dir})")
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        handle.close()
    return EXIT_OK


def cmd_tool_serve(args) -> int:
    from .toolproto import serve_tool

    tool = make_tool(_tool_spec_from_args(args))
    handle = serve_tool(tool, host=args.host, port=args.port)
    print(f"tool server on {handle.url}")
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        handle.close()
    return EXIT_OK


def cmd_conformance(args) -> int:
    from .toolproto import check_conformance

    report = check_conformance(args.endpoint)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_DOMAIN_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="visagent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an agent session to completion")
    run.add_argument("--config", required=True, help="agent config JSON file")
    run.add_argument("--goal", required=True)
    run.add_argument("--tool", required=True, help="builtin:<name> or http endpoint")
    run.add_argument("--perception", default=None, help="oracle | llm | stub:hill | stub:compare | stub:bounce")
    run.add_argument("--data", default=None, help="data file for builtin tools (RAW volume or CSV)")
    run.add_argument("--x", default=None)
    run.add_argument("--y", default=None)
    run.add_argument("--label", default=None)
    run.add_argument("--band", nargs=2, type=float, default=None, help="phantom band (builtin:phantom)")
    run.add_argument("--image-size", nargs=2, type=int, default=None)
    run.add_argument("--target", default=None, help="oracle target structure id")
    run.add_argument("--max-iterations", type=int, default=None)
    run.add_argument("--planner", default=None)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--store", default="./sessions")
    run.add_argument("--session-id", default=None)
    run.add_argument("--wall-clock", action="store_true", help="record real wall times (non-reproducible)")
    run.set_defaults(func=cmd_run)

    render = sub.add_parser("render", help="one-shot render to PNG")
    render.add_argument("--kind", required=True, choices=("volume", "scatter", "parallel"))
    render.add_argument("--data", required=True)
    render.add_argument("--out", required=True)
    render.add_argument("--start", type=float, default=0.0)
    render.add_argument("--end", type=float, default=1.0)
    render.add_argument("--peak", type=float, default=1.0)
    render.add_argument("--opacity", type=float, default=1.0)
    render.add_argument("--x", default="x")
    render.add_argument("--y", default="y")
    render.add_argument("--label", default=None)
    render.add_argument("--image-size", nargs=2, type=int, default=(256, 256))
    render.set_defaults(func=cmd_render)

    bench = sub.add_parser("bench", help="run perception benchmarks")
    bench.add_argument("--task", action="append", default=None, help="task name (repeatable); default: all")
    bench.add_argument("--trials", type=int, default=10)
    bench.add_argument("--perception", default="stub:exact", help="stub:exact | llm (live model, opt-in)")
    bench.add_argument("--seed0", type=int, default=0)
    bench.add_argument("--out", default=None, help="write the JSON report here")
    bench.set_defaults(func=cmd_bench)

    serve = sub.add_parser("serve", help="run the session service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8787)
    serve.add_argument("--data-dir", default=None, help=f"defaults to ${ENV_DATA_DIR} or ./visagent-data")
    serve.add_argument("--static", default=None, help="directory of web UI assets to serve")
    serve.set_defaults(func=cmd_serve)

    tool_serve = sub.add_parser("tool-serve", help="expose a built-in tool on the wire protocol")
    tool_serve.add_argument("--tool", required=True, help="builtin:<name>")
    tool_serve.add_argument("--data", default=None)
    tool_serve.add_argument("--x", default=None)
    tool_serve.add_argument("--y", default=None)
    tool_serve.add_argument("--label", default=None)
    tool_serve.add_argument("--band", nargs=2, type=float, default=None)
    tool_serve.add_argument("--image-size", nargs=2, type=int, default=None)
    tool_serve.add_argument("--seed", type=int, default=None)
    tool_serve.add_argument("--host", default="127.0.0.1")
    tool_serve.add_argument("--port", type=int, default=0)
    tool_serve.set_defaults(func=cmd_tool_serve)

    conf = sub.add_parser("conformance", help="check a tool endpoint against the wire protocol")
    conf.add_argument("--endpoint", required=True)
    conf.set_defaults(func=cmd_conformance)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except VisAgentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
