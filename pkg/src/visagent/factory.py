"""Construction of tools and perception backends from config-style specs.

Shared by the command line and the session service so that a run is fully
described by (config, goal, tool spec, perception spec).
"""

from __future__ import annotations

from .config import PERCEPTION_LLM, PERCEPTION_ORACLE, AgentConfig
from .errors import ConfigError
from .perception.adapters import LlmPerception, OverplotComparisonPerception, VolumeOraclePerception
from .perception.llm import ChatClient
from .perception.oracle import OracleThresholds
from .perception.stubs import BouncingStub, comparison_stub, hill_climb_stub


def make_tool(spec: dict):
    """Tool handle from a spec: {"endpoint": url} or {"builtin": name, ...}."""
    if "endpoint" in spec:
        from .toolproto.client import RemoteTool

        return RemoteTool(spec["endpoint"])
    builtin = spec.get("builtin")
    if builtin == "volume":
        from .toolproto.tools import VolumeTool
        from .volren.camera import default_camera
        from .volren.dataset import load_with_sidecar

        if "data" not in spec:
            raise ConfigError("builtin volume tool needs a 'data' RAW path (with JSON sidecar)")
        volume = load_with_sidecar(spec["data"])
        image_size = tuple(spec.get("image_size", (256, 256)))
        return VolumeTool(volume=volume, camera=default_camera(volume.extent, image_size))
    if builtin == "phantom":
        from .bench.phantom import band_phantom, nested_phantom
        from .toolproto.tools import VolumeTool
        from .volren.camera import default_camera

        kind = spec.get("kind", "band")
        dims = tuple(spec.get("dims", (32, 32, 32)))
        seed = int(spec.get("seed", 0))
        if kind == "nested":
            volume = nested_phantom(dims=dims, seed=seed)
        else:
            band = tuple(spec.get("band", (100.0, 125.0)))
            volume = band_phantom(band, dims=dims, seed=seed)
        image_size = tuple(spec.get("image_size", (256, 256)))
        return VolumeTool(volume=volume, camera=default_camera(volume.extent, image_size))
    if builtin == "scatter":
        from .charts.csvio import load_points_csv
        from .toolproto.tools import ScatterTool

        if "csv" not in spec:
            raise ConfigError("builtin scatter tool needs a 'csv' path plus x/y column names")
        points = load_points_csv(spec["csv"], spec.get("x", "x"), spec.get("y", "y"), spec.get("label"))
        return ScatterTool(points=points, radius=int(spec.get("radius", 3)))
    if builtin == "mock-dr":
        from .toolproto.tools import MockDrTool

        names = tuple(spec.get("params", ("perplexity",)))
        n = len(names)
        return MockDrTool(
            param_names=names,
            lower=float(spec.get("lower", 2.0)),
            upper=float(spec.get("upper", 100.0)),
            optimum=tuple(spec.get("optimum", (30.0,) * n)),
            sigma=float(spec.get("sigma", 30.0)),
            seed=int(spec.get("seed", 7)),
        )
    raise ConfigError(f"unrecognized tool spec {spec!r}")


def make_perception(config: AgentConfig, descriptor, override: str | None = None):
    """Perception backend for a run.

    ``override`` accepts "oracle", "llm", "stub:hill", "stub:compare", or
    "stub:bounce" and wins over config.perception_kind (a CLI affordance for
    offline runs); the oracle flavor follows the tool's stats channel.
    """
    kind = override or config.perception_kind
    pp = config.perception_params

    if kind == PERCEPTION_ORACLE:
        thresholds = OracleThresholds.from_dict(pp.get("thresholds", {}))
        stats_kind = (descriptor.metadata or {}).get("stats_kind", "")
        if stats_kind == "overplot":
            return OverplotComparisonPerception(thresholds=thresholds)
        target = pp.get("target")
        if not target:
            raise ConfigError("oracle perception over structure stats needs perception_params.target")
        return VolumeOraclePerception(target=target, thresholds=thresholds)
    if kind == PERCEPTION_LLM:
        client = ChatClient(
            max_attempts=int(pp.get("max_attempts", 3)),
            max_in_flight=int(pp.get("max_in_flight", 4)),
        )
        return LlmPerception(
            client=client,
            context_window=int(config.planner_params.get("context_window", 3)),
        )
    if kind.startswith("stub:"):
        flavor = kind.split(":", 1)[1]
        space = descriptor.param_space
        numeric = [e for e in space.entries if e.kind in ("continuous", "integer")]
        if flavor in ("hill", "compare"):
            if not numeric:
                raise ConfigError("search stubs need a numeric parameter")
            e = numeric[0]
            maker = hill_climb_stub if flavor == "hill" else comparison_stub
            return maker(param=e.name, lower=e.lower, upper=e.upper)
        if flavor == "bounce":
            lo_corner = {e.name: e.lower for e in numeric}
            hi_corner = {e.name: e.upper for e in numeric}
            return BouncingStub(corners=[lo_corner, hi_corner])
        raise ConfigError(f"unknown stub perception {kind!r}")
    raise ConfigError(f"unknown perception kind {kind!r}")
