from .camera import Camera, default_camera
from .colormap import apply_colormap
from .dataset import VolumeDataset, compute_histogram, load_raw
from .render import RenderOptions, StructureStats, render_volume
from .tf import TriangularTF, eval_tf

__all__ = [
    "Camera",
    "RenderOptions",
    "StructureStats",
    "TriangularTF",
    "VolumeDataset",
    "apply_colormap",
    "compute_histogram",
    "default_camera",
    "eval_tf",
    "load_raw",
    "render_volume",
]
