"""
Cluster Map - the number line of segments that ASURA draws against.

Nodes are assigned one or more integer-aligned segments according to their
capacity. A map is an immutable epoch snapshot: adding or removing a node
returns the next epoch and leaves every surviving segment untouched.
"""

import math
from typing import Dict, Iterable, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from ..models import Algorithm, NodeSpec, Segment
from ..utils.config import config
from ..utils.errors import (
    InvalidCapacityError,
    NodeAlreadyPresentError,
    NodeNotFoundError,
)

CONSERVATION_TOLERANCE = 1e-9

# Bytes per entry in the memory model: 4-byte node id/number plus 4-byte length or hash.
ENTRY_BYTES = 8
NODE_ID_BYTES = 4


def segments_for_capacity(capacity: float, unit: float) -> List[float]:
    """
    Split a capacity into segment lengths.

    ``floor(capacity / unit)`` full segments of length 1.0, plus one segment
    holding the remainder when it is non-zero.
    """
    if capacity <= 0:
        raise InvalidCapacityError(f"capacity must be > 0, got {capacity}")
    if unit <= 0:
        raise InvalidCapacityError(f"capacity unit must be > 0, got {unit}")

    ratio = capacity / unit
    full = math.floor(ratio)
    lengths = [1.0] * full
    remainder = ratio - full
    if remainder > 0:
        lengths.append(remainder)
    return lengths


class ClusterMap(BaseModel):
    """
    Immutable snapshot of node capacities and segment assignments.

    ``segments`` maps segment number to ``Segment``; ``nodes`` maps node id to
    capacity. Derived tables (dense lengths/owners indexed by segment number)
    are computed once per snapshot for the lookup hot path.
    """
    model_config = ConfigDict(frozen=True)

    unit: float = Field(default_factory=lambda: config.PLACEMENT_CAPACITY_UNIT, gt=0.0, allow_inf_nan=False)
    epoch: int = Field(default=0, ge=0)
    nodes: Dict[int, float] = {}
    segments: Dict[int, Segment] = {}

    _lengths: List[float] = PrivateAttr(default_factory=list)
    _owners: List[Optional[int]] = PrivateAttr(default_factory=list)
    _node_segments: Dict[int, List[int]] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_assignment(self) -> "ClusterMap":
        for node, capacity in self.nodes.items():
            if not math.isfinite(capacity) or capacity <= 0:
                raise ValueError(f"node {node} has capacity {capacity}")
        owned: Dict[int, float] = {node: 0.0 for node in self.nodes}
        for number, segment in self.segments.items():
            if number != segment.number:
                raise ValueError(f"segment keyed {number} has number {segment.number}")
            if segment.owner not in owned:
                raise ValueError(f"segment {number} owned by unknown node {segment.owner}")
            owned[segment.owner] += segment.length
        for node, total in owned.items():
            if total == 0.0:
                raise ValueError(f"node {node} owns no segment")
            expected = self.nodes[node] / self.unit
            if abs(total - expected) > CONSERVATION_TOLERANCE * max(1.0, expected):
                raise ValueError(
                    f"node {node}: segment lengths sum to {total}, capacity/unit is {expected}"
                )
        return self

    def model_post_init(self, __context) -> None:
        size = max(self.segments) + 1 if self.segments else 0
        lengths = [0.0] * size
        owners: List[Optional[int]] = [None] * size
        node_segments: Dict[int, List[int]] = {node: [] for node in self.nodes}
        for number in sorted(self.segments):
            segment = self.segments[number]
            lengths[number] = segment.length
            owners[number] = segment.owner
            # unknown owners are reported by _check_assignment
            if segment.owner in node_segments:
                node_segments[segment.owner].append(number)
        self._lengths = lengths
        self._owners = owners
        self._node_segments = node_segments

    # -- construction -----------------------------------------------------

    @classmethod
    def empty(cls, unit: Optional[float] = None) -> "ClusterMap":
        if unit is None:
            unit = config.PLACEMENT_CAPACITY_UNIT
        if unit <= 0:
            raise InvalidCapacityError(f"capacity unit must be > 0, got {unit}")
        return cls(unit=unit)

    @classmethod
    def from_specs(cls, specs: Iterable[NodeSpec], unit: Optional[float] = None) -> "ClusterMap":
        """
        Build a map in one pass; the result equals adding ``specs`` one by one
        to an empty map (apart from the epoch, which stays 0).
        """
        if unit is None:
            unit = config.PLACEMENT_CAPACITY_UNIT
        if unit <= 0:
            raise InvalidCapacityError(f"capacity unit must be > 0, got {unit}")

        nodes: Dict[int, float] = {}
        segments: Dict[int, Segment] = {}
        next_number = 0
        for spec in specs:
            if spec.id in nodes:
                raise NodeAlreadyPresentError(spec.id)
            nodes[spec.id] = spec.capacity
            for length in segments_for_capacity(spec.capacity, unit):
                segments[next_number] = Segment(number=next_number, length=length, owner=spec.id)
                next_number += 1
        return cls(unit=unit, nodes=nodes, segments=segments)

    @classmethod
    def from_segments(
        cls,
        segments: Iterable[Tuple[int, float, int]],
        unit: Optional[float] = None,
        epoch: int = 0,
    ) -> "ClusterMap":
        """Build a map from explicit ``(number, length, owner)`` triples; capacities follow."""
        if unit is None:
            unit = config.PLACEMENT_CAPACITY_UNIT
        table: Dict[int, Segment] = {}
        totals: Dict[int, List[float]] = {}
        for number, length, owner in segments:
            if number in table:
                raise ValueError(f"segment {number} assigned twice")
            table[number] = Segment(number=number, length=length, owner=owner)
            totals.setdefault(owner, []).append(length)
        nodes = {owner: math.fsum(lengths) * unit for owner, lengths in totals.items()}
        return cls(unit=unit, epoch=epoch, nodes=nodes, segments=table)

    # -- derived values ---------------------------------------------------

    @property
    def lengths(self) -> List[float]:
        """Dense length table indexed by segment number; 0.0 marks a hole."""
        return self._lengths

    @property
    def owners(self) -> List[Optional[int]]:
        """Dense owner table indexed by segment number; None marks a hole."""
        return self._owners

    @property
    def max_segment_number_plus_1(self) -> int:
        return len(self._lengths)

    @property
    def coverage_extent(self) -> float:
        """Largest segment number plus that segment's length (n)."""
        if not self._lengths:
            return 0.0
        top = len(self._lengths) - 1
        return top + self._lengths[top]

    @property
    def total_length(self) -> float:
        return math.fsum(s.length for s in self.segments.values())

    @property
    def hole_length(self) -> float:
        """Length of the number line below the coverage extent with no owner (h)."""
        return max(0.0, self.coverage_extent - self.total_length)

    def hole_length_by_scan(self) -> float:
        """Gap-by-gap computation of the hole length."""
        if not self._lengths:
            return 0.0
        top = len(self._lengths) - 1
        return math.fsum(1.0 - self._lengths[number] for number in range(top))

    @property
    def node_ids(self) -> List[int]:
        return sorted(self.nodes)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def is_empty(self) -> bool:
        return not self.nodes

    def segments_of(self, node: int) -> List[int]:
        if node not in self._node_segments:
            raise NodeNotFoundError(node)
        return list(self._node_segments[node])

    def node_length(self, node: int) -> float:
        return math.fsum(self._lengths[n] for n in self.segments_of(node))

    def capacity_of(self, node: int) -> float:
        if node not in self.nodes:
            raise NodeNotFoundError(node)
        return self.nodes[node]

    def owner_of(self, number: int) -> Optional[int]:
        if 0 <= number < len(self._owners):
            return self._owners[number]
        return None

    def unused_numbers(self, count: int) -> List[int]:
        """The ``count`` smallest non-negative integers without a segment, ascending."""
        free: List[int] = []
        for number, owner in enumerate(self._owners):
            if len(free) == count:
                return free
            if owner is None:
                free.append(number)
        number = len(self._owners)
        while len(free) < count:
            free.append(number)
            number += 1
        return free

    def diff(self, other: "ClusterMap") -> Dict[int, Tuple[Optional[Segment], Optional[Segment]]]:
        """Segment numbers whose assignment differs between two maps: number -> (self, other)."""
        changes: Dict[int, Tuple[Optional[Segment], Optional[Segment]]] = {}
        for number in set(self.segments) | set(other.segments):
            mine = self.segments.get(number)
            theirs = other.segments.get(number)
            if mine != theirs:
                changes[number] = (mine, theirs)
        return changes

    # -- epochs -----------------------------------------------------------

    def add_node(self, spec: NodeSpec) -> "ClusterMap":
        """Next epoch with ``spec`` placed on the smallest unused segment numbers."""
        if spec.id in self.nodes:
            raise NodeAlreadyPresentError(spec.id)

        lengths = segments_for_capacity(spec.capacity, self.unit)
        numbers = self.unused_numbers(len(lengths))
        segments = dict(self.segments)
        for number, length in zip(numbers, lengths):
            segments[number] = Segment(number=number, length=length, owner=spec.id)
        nodes = dict(self.nodes)
        nodes[spec.id] = spec.capacity

        logger.debug("epoch {}: add node {} on segments {}", self.epoch + 1, spec.id, numbers)
        return ClusterMap(unit=self.unit, epoch=self.epoch + 1, nodes=nodes, segments=segments)

    def remove_node(self, node: int) -> "ClusterMap":
        """Next epoch without ``node``; its segment numbers become holes."""
        if node not in self.nodes:
            raise NodeNotFoundError(node)

        removed = set(self._node_segments[node])
        segments = {n: s for n, s in self.segments.items() if n not in removed}
        nodes = {n: c for n, c in self.nodes.items() if n != node}

        logger.debug("epoch {}: remove node {} from segments {}", self.epoch + 1, node, sorted(removed))
        return ClusterMap(unit=self.unit, epoch=self.epoch + 1, nodes=nodes, segments=segments)


def add_node(cluster_map: ClusterMap, spec: NodeSpec) -> ClusterMap:
    return cluster_map.add_node(spec)


def remove_node(cluster_map: ClusterMap, node: int) -> ClusterMap:
    return cluster_map.remove_node(node)


def memory_account(
    cluster_map: ClusterMap,
    algo: Algorithm,
    virtual_nodes: Optional[int] = None,
) -> int:
    """
    Bytes of placement state under the 4-byte-field memory model.

    ASURA keeps one (node number, segment length) pair per node: 8N.
    Consistent Hashing keeps one (hash, node id) pair per virtual node: 8NV.
    Straw Buckets keep only the node ids: 4N.
    """
    n = cluster_map.node_count
    if algo == Algorithm.ASURA:
        return ENTRY_BYTES * n
    if algo == Algorithm.RING:
        v = config.PLACEMENT_VNODES if virtual_nodes is None else virtual_nodes
        return ENTRY_BYTES * n * v
    return NODE_ID_BYTES * n
