"""metriclab: finite metric-space deformations and map-distortion analysis."""

from .core import (LengthGraph, SampledSpace, shortest_path_metric,
                   curve_length, uniformity_constant, space_diameter,
                   check_metric_axioms)
from .models import ModelSpec, build_model_space, interval_space

__all__ = [
    "LengthGraph", "SampledSpace", "shortest_path_metric", "curve_length",
    "uniformity_constant", "space_diameter", "check_metric_axioms",
    "ModelSpec", "build_model_space", "interval_space",
]
