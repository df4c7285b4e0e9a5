from .canvas import CanvasConfig, DrawTrace
from .csvio import load_points_csv, load_rows_csv
from .graph import fr_layout, render_node_link
from .parallel import render_parallel_coords
from .scatter import CoverageBuffer, PointSet, overplot_metrics, render_scatter

__all__ = [
    "CanvasConfig",
    "CoverageBuffer",
    "DrawTrace",
    "PointSet",
    "fr_layout",
    "load_points_csv",
    "load_rows_csv",
    "overplot_metrics",
    "render_node_link",
    "render_parallel_coords",
    "render_scatter",
]
