"""Grey value image inpainting by blended diffusion and shock filtering."""

from .grid import as_image, as_mask, assert_finite, mirror_extend
from .image_io import ImageIOError, load_image, load_mask, save_image
from .morphology import ROTATION_DELTA, StabilityBounds, stability_bounds
from .shock import ShockParams, SolveStats, shock_filter_evolve, shock_step
from .solver import (
    SolverParams,
    ds_inpaint,
    ds_step,
    homogeneous_diffusion_inpaint,
)

__version__ = "1.0.0"

__all__ = [
    "ImageIOError",
    "ROTATION_DELTA",
    "ShockParams",
    "SolveStats",
    "SolverParams",
    "StabilityBounds",
    "as_image",
    "as_mask",
    "assert_finite",
    "ds_inpaint",
    "ds_step",
    "homogeneous_diffusion_inpaint",
    "load_image",
    "load_mask",
    "mirror_extend",
    "save_image",
    "shock_filter_evolve",
    "shock_step",
    "stability_bounds",
    "__version__",
]
