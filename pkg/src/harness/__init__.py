"""Harness package - adapters, experiments and reporting"""

from .placers import Placer, AsuraPlacer, RingPlacer, StrawPlacer, make_placer, uniform_map, capacity_map
from .tracker import MovementTracker, TrackerStep
from .experiments import (
    max_variability,
    extra_node_percent,
    run_uniformity,
    parse_events,
    run_churn,
    check_churn,
    run_draw_count,
    fit_shape,
    run_scaling,
    run_shard_sim,
)
from .reporting import (
    uniformity_frame,
    churn_frame,
    draw_frame,
    scaling_frame,
    shard_frame,
    write_csv,
)

__all__ = [
    "Placer",
    "AsuraPlacer",
    "RingPlacer",
    "StrawPlacer",
    "make_placer",
    "uniform_map",
    "capacity_map",
    "MovementTracker",
    "TrackerStep",
    "max_variability",
    "extra_node_percent",
    "run_uniformity",
    "parse_events",
    "run_churn",
    "check_churn",
    "run_draw_count",
    "fit_shape",
    "run_scaling",
    "run_shard_sim",
    "uniformity_frame",
    "churn_frame",
    "draw_frame",
    "scaling_frame",
    "shard_frame",
    "write_csv",
]
