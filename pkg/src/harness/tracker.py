"""
Movement tracker - per-datum churn metadata kept across membership changes.

Only data whose metadata flags them are recomputed after an event; everything
else keeps its placement and metadata untouched.
"""

from typing import Dict, Iterable, List, Set

from loguru import logger

from ..models import ChurnMetadata, MoveDecision, NodeSpec
from ..placement.asura import lookup_with_metadata, moves_on_add, moves_on_remove
from ..placement.cluster_map import ClusterMap


class TrackerStep:
    """What one event did: flagged data, recomputed data, data that actually moved."""

    __slots__ = ("flagged", "recomputed", "moved")

    def __init__(self, flagged: Set[int], recomputed: Set[int], moved: Set[int]):
        self.flagged = flagged
        self.recomputed = recomputed
        self.moved = moved


class MovementTracker:
    def __init__(self, cluster_map: ClusterMap, datum_ids: Iterable[int], k: int = 1):
        self.cluster_map = cluster_map
        self.k = k
        self.placements: Dict[int, List[int]] = {}
        self.metadata: Dict[int, ChurnMetadata] = {}
        for datum_id in datum_ids:
            self._refresh(datum_id)

    def _refresh(self, datum_id: int) -> List[int]:
        placement, metadata = lookup_with_metadata(datum_id, self.cluster_map, self.k)
        self.placements[datum_id] = placement.nodes
        self.metadata[datum_id] = metadata
        return placement.nodes

    def _recompute(self, datum_ids: Iterable[int]) -> Set[int]:
        moved = set()
        for datum_id in datum_ids:
            before = self.placements[datum_id]
            if self._refresh(datum_id) != before:
                moved.add(datum_id)
        return moved

    def add_node(self, spec: NodeSpec) -> TrackerStep:
        self.cluster_map = self.cluster_map.add_node(spec)
        added = self.cluster_map.segments_of(spec.id)
        flagged = {
            datum_id
            for datum_id, metadata in self.metadata.items()
            if any(moves_on_add(metadata, number) == MoveDecision.RECHECK for number in added)
        }
        moved = self._recompute(flagged)
        logger.debug("add node {}: {} flagged, {} moved", spec.id, len(flagged), len(moved))
        return TrackerStep(flagged, set(flagged), moved)

    def remove_node(self, node: int) -> TrackerStep:
        removed = self.cluster_map.segments_of(node)
        self.cluster_map = self.cluster_map.remove_node(node)
        flagged = {
            datum_id
            for datum_id, metadata in self.metadata.items()
            if moves_on_remove(metadata, removed) == MoveDecision.MUST_RECOMPUTE
        }
        # a new hole below the addition number may now precede it
        lowest = min(removed)
        stale = {
            datum_id
            for datum_id, metadata in self.metadata.items()
            if metadata.addition_number > lowest and datum_id not in flagged
        }
        moved = self._recompute(flagged)
        self._recompute(stale)
        logger.debug("remove node {}: {} flagged, {} refreshed, {} moved", node, len(flagged), len(stale), len(moved))
        return TrackerStep(flagged, flagged | stale, moved)
