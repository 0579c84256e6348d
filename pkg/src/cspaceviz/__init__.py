"""Radial visualization of sampled robot configuration spaces.

Sample a planar arm's C-space, render the joint-pair conditional trees as
concentric colored rings, and compare renders pixel by pixel.
"""

from .codecs import decode_png, decode_ppm, encode_png, encode_ppm, read_image, write_image
from .core import (
    ConditionalTree, DiscretizationSpec, PerturbationSpec, apply_epsilon, bin_center, build_tree,
    discretize, duplicate_ranks, subsample,
)
from .estimators import PlanarCollisionChecker, RadialCSpaceRenderer
from .exceptions import (
    ConfigurationError, CSpaceVizError, ExperimentError, InputError, LengthMismatchError,
    SamplingBudgetExceeded, TooFewSamplesError, ZeroVarianceError,
)
from .experiments import (
    ExperimentConfig, checker_accuracy, inject_collision_states, run_accuracy_experiment,
    run_subset_experiment, visualization_accuracy,
)
from .metrics import DiffStats, mse, negative_subtraction, pixel_setminus
from .planar import (
    ALL, COLLISION, FREE, FREE_ONLY, CircleObstacle, Dataset, LinkSpec, PlanarRobot, Workspace,
    collision_mask, forward_kinematics, in_collision, random_workspace, sample_cspace,
)
from .render import (
    EARTH, ColorMap, LayoutSpec, RenderConfig, colormap_lookup, crop_legend, parent_color, render,
    render_dataset, ring_radius,
)
from .stats import CorrelationSummary, fisher_z_mean, pearson

__version__ = "0.1.0"

__all__ = [
    "ALL", "COLLISION", "EARTH", "FREE", "FREE_ONLY",
    "CSpaceVizError", "CircleObstacle", "ColorMap", "ConditionalTree", "ConfigurationError",
    "CorrelationSummary", "Dataset", "DiffStats", "DiscretizationSpec", "ExperimentConfig",
    "ExperimentError", "InputError", "LayoutSpec", "LengthMismatchError", "LinkSpec",
    "PerturbationSpec", "PlanarCollisionChecker", "PlanarRobot", "RadialCSpaceRenderer",
    "RenderConfig", "SamplingBudgetExceeded", "TooFewSamplesError", "Workspace", "ZeroVarianceError",
    "apply_epsilon", "bin_center", "build_tree", "checker_accuracy", "collision_mask",
    "colormap_lookup", "crop_legend", "decode_png", "decode_ppm", "discretize", "duplicate_ranks",
    "encode_png", "encode_ppm", "fisher_z_mean", "forward_kinematics", "in_collision",
    "inject_collision_states", "mse", "negative_subtraction", "parent_color", "pearson",
    "pixel_setminus", "random_workspace", "read_image", "render", "render_dataset", "ring_radius",
    "run_accuracy_experiment", "run_subset_experiment", "sample_cspace", "subsample",
    "visualization_accuracy", "write_image",
]
