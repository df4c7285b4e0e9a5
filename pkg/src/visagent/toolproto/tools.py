"""Built-in tools: in-process render backends that also serve over the wire."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..charts.canvas import CanvasConfig
from ..charts.scatter import PointSet, overplot_metrics, render_scatter
from ..errors import ProtocolError
from ..imaging import to_png
from ..params import ParamEntry, ParamSpace, ParamVector
from ..volren.camera import Camera, default_camera
from ..volren.dataset import VolumeDataset, compute_histogram, describe_histogram
from ..volren.render import RenderOptions, render_volume
from ..volren.tf import TriangularTF
from .descriptor import ToolDescriptor


def _check_bounds(descriptor: ToolDescriptor, params: ParamVector) -> None:
    for name, value in params.items():
        if name not in descriptor.param_space:
            raise ProtocolError("param_out_of_bounds", f"unknown parameter {name!r}")
        if not descriptor.param_space.entry(name).contains(value):
            raise ProtocolError("param_out_of_bounds", f"{name}={value!r} outside bounds")


@dataclass
class VolumeTool:
    """Triangular-TF volume rendering with per-structure stats."""

    volume: VolumeDataset
    camera: Optional[Camera] = None
    peak_opacity: float = 1.0
    options: RenderOptions = field(default_factory=RenderOptions)
    name: str = "volume"
    modality: str = "synthetic phantom"
    histogram_bins: int = 10

    def __post_init__(self):
        if self.camera is None:
            self.camera = default_camera(self.volume.extent)

    def describe(self) -> ToolDescriptor:
        lo, hi = self.volume.value_range
        hist = compute_histogram(self.volume, self.histogram_bins)
        return ToolDescriptor(
            name=self.name,
            param_space=ParamSpace(
                (
                    ParamEntry(name="start", kind="continuous", lower=lo, upper=hi),
                    ParamEntry(name="end", kind="continuous", lower=lo, upper=hi),
                )
            ),
            metadata={
                "value_range": [lo, hi],
                "histogram": describe_histogram(hist),
                "modality": self.modality,
                "stats_kind": "structures",
                "default_params": {"start": lo, "end": lo + (hi - lo) / 10.0},
            },
        )

    def render(self, params: ParamVector):
        descriptor = self.describe()
        _check_bounds(descriptor, params)
        start, end = float(params["start"]), float(params["end"])
        if not start < end:
            raise ProtocolError("invalid_params", f"need start < end, got [{start}, {end}]")
        tf = TriangularTF(start=start, end=end, peak_opacity=self.peak_opacity)
        result = render_volume(self.volume, tf, self.camera, self.options)
        stats = None
        if result.structures is not None:
            stats = {"structures": {sid: s.to_dict() for sid, s in result.structures.items()}}
        return to_png(result.image), stats


@dataclass
class ScatterTool:
    """Opacity-parameterized scatterplot with overplot metrics."""

    points: PointSet
    radius: int = 3
    canvas: CanvasConfig = field(default_factory=CanvasConfig)
    saturation: float = 0.98
    name: str = "scatter"

    def describe(self) -> ToolDescriptor:
        return ToolDescriptor(
            name=self.name,
            param_space=ParamSpace(
                (ParamEntry(name="opacity", kind="continuous", lower=0.001, upper=1.0),)
            ),
            metadata={"points": len(self.points), "radius": self.radius, "stats_kind": "overplot", "default_params": {"opacity": 1.0}},
        )

    def render(self, params: ParamVector):
        _check_bounds(self.describe(), params)
        image, buf = render_scatter(self.points, float(params["opacity"]), self.radius, self.canvas)
        metrics = overplot_metrics(buf, self.saturation)
        return to_png(image), {"overplot": metrics.to_dict()}


@dataclass
class MockDrTool:
    """Synthetic dimensionality-reduction tool with a known optimum.

    Renders k Gaussian clusters whose separation follows a Gaussian hill
    s(h) = s_max * exp(-(h - h_star)^2 / sigma^2) in the tuned hyperparameter
    (the squared distance to the per-parameter optima in the multi-parameter
    variant), so searches can be verified without an external process.
    """

    param_names: tuple = ("perplexity",)
    lower: float = 2.0
    upper: float = 100.0
    optimum: tuple = (30.0,)
    sigma: float = 30.0
    s_max: float = 0.45
    clusters: int = 4
    points_per_cluster: int = 60
    seed: int = 7
    canvas: CanvasConfig = field(default_factory=CanvasConfig)
    name: str = "mock-dr"

    def describe(self) -> ToolDescriptor:
        entries = tuple(
            ParamEntry(name=n, kind="continuous", lower=self.lower, upper=self.upper)
            for n in self.param_names
        )
        return ToolDescriptor(
            name=self.name,
            param_space=ParamSpace(entries),
            metadata={
                "kind": "dimensionality-reduction",
                "hyperparameters": list(self.param_names),
                "stats_kind": "separation",
                "bounds": [self.lower, self.upper],
            },
        )

    def separation(self, params: ParamVector) -> float:
        sq = 0.0
        for n, opt in zip(self.param_names, self.optimum):
            sq += (float(params[n]) - opt) ** 2
        return self.s_max * math.exp(-sq / (self.sigma**2))

    def render(self, params: ParamVector):
        _check_bounds(self.describe(), params)
        sep = self.separation(params)
        rng = np.random.default_rng(self.seed)
        pts = []
        labels = []
        for c in range(self.clusters):
            angle = 2.0 * math.pi * c / self.clusters
            cx = 0.5 + sep * math.cos(angle)
            cy = 0.5 + sep * math.sin(angle)
            blob = rng.normal((cx, cy), 0.035, size=(self.points_per_cluster, 2))
            pts.extend((float(x), float(y)) for x, y in blob)
            labels.extend([c] * self.points_per_cluster)
        point_set = PointSet(points=tuple(pts), labels=tuple(labels))
        image, _ = render_scatter(
            point_set, opacity=0.9, radius=3, canvas=self.canvas, bounds=((-0.2, 1.2), (-0.2, 1.2))
        )
        stats = {
            "separation": sep,
            "points": [[round(x, 6), round(y, 6)] for x, y in pts],
            "labels": labels,
        }
        return to_png(image), stats
