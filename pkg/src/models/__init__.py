"""Models package"""
from .schemas import (
    Algorithm,
    NodeSpec,
    Segment,
    Selection,
    Placement,
    DrawTrace,
    ChurnMetadata,
    MoveDecision,
    ChurnEventKind,
    ChurnEvent,
    UniformityReport,
    ChurnReport,
    DrawReport,
    ScalingPoint,
    ScalingReport,
)

__all__ = [
    "Algorithm",
    "NodeSpec",
    "Segment",
    "Selection",
    "Placement",
    "DrawTrace",
    "ChurnMetadata",
    "MoveDecision",
    "ChurnEventKind",
    "ChurnEvent",
    "UniformityReport",
    "ChurnReport",
    "DrawReport",
    "ScalingPoint",
    "ScalingReport",
]
