"""
ASURA Placement Toolkit - Data Models and Schemas
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Algorithm(str, Enum):
    """Placement algorithm under test"""
    ASURA = "asura"
    RING = "ring"
    STRAW = "straw"


class NodeSpec(BaseModel):
    """A node and its capacity, in the same units as the map's capacity unit"""
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0, lt=2**64, description="64-bit node id")
    capacity: float = Field(gt=0.0, allow_inf_nan=False)


class Segment(BaseModel):
    """Half-open interval [number, number + length) on the number line"""
    model_config = ConfigDict(frozen=True)

    number: int = Field(ge=0)
    length: float = Field(gt=0.0, le=1.0)
    owner: int = Field(ge=0, lt=2**64)

    @property
    def end(self) -> float:
        return self.number + self.length


class Selection(BaseModel):
    """One replica of a placement"""
    model_config = ConfigDict(frozen=True)

    segment: int
    node: int


class Placement(BaseModel):
    """Ordered replica selections for a datum; owners are pairwise distinct"""
    model_config = ConfigDict(frozen=True)

    selections: List[Selection]
    epoch: int = 0

    @model_validator(mode="after")
    def _distinct_nodes(self) -> "Placement":
        nodes = [s.node for s in self.selections]
        if len(set(nodes)) != len(nodes):
            raise ValueError("placement selects the same node twice")
        return self

    @property
    def nodes(self) -> List[int]:
        return [s.node for s in self.selections]

    @property
    def segments(self) -> List[int]:
        return [s.segment for s in self.selections]

    @property
    def primary(self) -> Selection:
        return self.selections[0]


class DrawTrace(BaseModel):
    """ASURA numbers surfaced by the cascade and which of them were accepted"""
    drawn: List[float] = []
    hit_indices: List[int] = []


class ChurnMetadata(BaseModel):
    """Per-datum numbers that let a node decide cheaply whether churn affects it"""
    model_config = ConfigDict(frozen=True)

    addition_number: int = Field(ge=0)
    remove_numbers: List[int]


class MoveDecision(str, Enum):
    """Outcome of a metadata check against a churn event"""
    UNAFFECTED = "unaffected"
    RECHECK = "recheck"
    MUST_RECOMPUTE = "must_recompute"


class ChurnEventKind(str, Enum):
    """Kind of membership change"""
    ADD = "add"
    REMOVE = "remove"


class ChurnEvent(BaseModel):
    """A membership change: add a node of some capacity, or remove a node"""
    kind: ChurnEventKind
    capacity: Optional[float] = Field(
        default=None, gt=0.0, allow_inf_nan=False, description="capacity of an added node"
    )
    node_id: Optional[int] = Field(default=None, ge=0, description="node to remove, or explicit id to add")

    @model_validator(mode="after")
    def _check_kind(self) -> "ChurnEvent":
        if self.kind == ChurnEventKind.ADD and self.capacity is None:
            raise ValueError("add events need a capacity")
        if self.kind == ChurnEventKind.REMOVE and self.node_id is None:
            raise ValueError("remove events need a node_id")
        return self


class UniformityReport(BaseModel):
    """Max-variability statistics over repeated placement trials"""
    algo: Algorithm
    nodes: int = Field(ge=1)
    virtual_nodes: int = Field(ge=0, description="0 for algorithms without a ring")
    data_per_node: int = Field(ge=1)
    trials: int = Field(ge=1)
    per_trial_percent: List[float]
    max_variability_percent: float = Field(ge=0.0, description="largest per-trial value")
    mean_percent: float = Field(ge=0.0)
    median_percent: float = Field(ge=0.0)
    stddev_percent: float = Field(ge=0.0)
    extra_node_percent: float = Field(ge=0.0, description="nodes needed beyond ideal at the median variability")
    elapsed_seconds: float = Field(default=0.0, ge=0.0)


class ChurnReport(BaseModel):
    """Data movement caused by one membership change"""
    algo: Algorithm
    trial: int = Field(default=0, ge=0)
    event: ChurnEventKind
    node_id: int
    moved_count: int = Field(ge=0)
    total_count: int = Field(ge=1)
    moved_fraction: float = Field(ge=0.0, le=1.0)
    expected_fraction: float = Field(ge=0.0, le=1.0, description="capacity-proportional expectation")
    misdirected_count: int = Field(ge=0, description="moves that violate optimal movement")
    flagged_count: Optional[int] = Field(default=None, ge=0, description="data flagged by churn metadata")
    metadata_false_negatives: Optional[int] = Field(default=None, ge=0)


class DrawReport(BaseModel):
    """Measured versus predicted raw draws per ASURA lookup"""
    trial: int = Field(default=0, ge=0)
    node_count: int = Field(ge=1)
    n: float = Field(gt=0.0)
    h: float = Field(ge=0.0)
    ids_count: int = Field(ge=1)
    measured_mean_draws: float = Field(ge=1.0)
    predicted: float = Field(ge=1.0)
    relative_error: float = Field(ge=0.0)


class ScalingPoint(BaseModel):
    """Lookup cost at one cluster size"""
    nodes: int = Field(ge=1)
    mean_wall_us: float = Field(ge=0.0)
    mean_ops: float = Field(ge=0.0, description="draws, probe depth or comparisons")
    max_ops: int = Field(ge=0)


class ScalingReport(BaseModel):
    """Lookup cost growth for one algorithm"""
    algo: Algorithm
    virtual_nodes: int = Field(ge=0)
    node_counts: List[int]
    mean_wall_us: List[float]
    mean_ops: List[float]
    points: List[ScalingPoint]
    shape: str = Field(description="constant, logarithmic or linear")
    r_squared_linear: float = Field(description="fit of ops against nodes")
    r_squared_log: float = Field(description="fit of ops against log2 of ring points or nodes")

    @model_validator(mode="after")
    def _equal_lengths(self) -> "ScalingReport":
        if not (len(self.node_counts) == len(self.mean_wall_us) == len(self.mean_ops) == len(self.points)):
            raise ValueError("scaling series must have equal lengths")
        return self
