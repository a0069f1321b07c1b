"""
Uniform adapters over the three placement algorithms.

A placer wraps one algorithm's state for one membership snapshot. Experiments
only talk to placers, so the same scenario runs unchanged against ASURA, the
ring and the straw set.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models import Algorithm, NodeSpec
from ..placement.asura import asura_lookup, build_source, capacity_share
from ..placement.cluster_map import ClusterMap
from ..placement.ring import HashRing
from ..placement.straw import StrawSet
from ..utils.config import config
from . import bulk


class Placer:
    """Base adapter; subclasses implement the algorithm-specific parts."""

    algo: Algorithm

    def __init__(self, cluster_map: ClusterMap):
        self.cluster_map = cluster_map

    @property
    def node_ids(self) -> List[int]:
        return self.cluster_map.node_ids

    @property
    def virtual_nodes(self) -> int:
        return 0

    def expected_shares(self) -> Dict[int, float]:
        """Fraction of data each node should receive."""
        n = self.cluster_map.node_count
        return {node: 1.0 / n for node in self.node_ids}

    def locate(self, datum_id: int) -> int:
        raise NotImplementedError

    def locate_with_ops(self, datum_id: int) -> Tuple[int, int]:
        """Node plus the algorithm's internal operation count for this lookup."""
        raise NotImplementedError

    def locate_many(self, datum_ids: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def with_node(self, spec: NodeSpec) -> "Placer":
        return type(self)(self.cluster_map.add_node(spec), **self._options())

    def without_node(self, node: int) -> "Placer":
        return type(self)(self.cluster_map.remove_node(node), **self._options())

    def _options(self) -> dict:
        return {}


class AsuraPlacer(Placer):
    algo = Algorithm.ASURA

    def expected_shares(self) -> Dict[int, float]:
        return capacity_share(self.cluster_map)

    def locate(self, datum_id: int) -> int:
        return asura_lookup(datum_id, self.cluster_map)[1]

    def locate_with_ops(self, datum_id: int) -> Tuple[int, int]:
        source = build_source(datum_id, self.cluster_map.max_segment_number_plus_1)
        _, node = asura_lookup(datum_id, self.cluster_map, source)
        return node, source.draws

    def locate_many(self, datum_ids: np.ndarray) -> np.ndarray:
        return bulk.asura_nodes(datum_ids, self.cluster_map)[0]


class RingPlacer(Placer):
    algo = Algorithm.RING

    def __init__(self, cluster_map: ClusterMap, virtual_nodes: Optional[int] = None):
        super().__init__(cluster_map)
        self.ring = HashRing(cluster_map.node_ids, virtual_nodes)

    @property
    def virtual_nodes(self) -> int:
        return self.ring.virtual_nodes

    def _options(self) -> dict:
        return {"virtual_nodes": self.ring.virtual_nodes}

    def locate(self, datum_id: int) -> int:
        return self.ring.lookup(datum_id)

    def locate_with_ops(self, datum_id: int) -> Tuple[int, int]:
        return self.ring.probe_depth(datum_id)

    def locate_many(self, datum_ids: np.ndarray) -> np.ndarray:
        return bulk.ring_nodes(datum_ids, self.ring)


class StrawPlacer(Placer):
    algo = Algorithm.STRAW

    def __init__(self, cluster_map: ClusterMap):
        super().__init__(cluster_map)
        self.straws = StrawSet(cluster_map.node_ids)

    def locate(self, datum_id: int) -> int:
        return self.straws.lookup(datum_id)

    def locate_with_ops(self, datum_id: int) -> Tuple[int, int]:
        return self.straws.lookup_with_comparisons(datum_id)

    def locate_many(self, datum_ids: np.ndarray) -> np.ndarray:
        return bulk.straw_nodes(datum_ids, self.straws)


def make_placer(algo: Algorithm, cluster_map: ClusterMap, virtual_nodes: Optional[int] = None) -> Placer:
    algo = Algorithm(algo)
    if algo == Algorithm.ASURA:
        return AsuraPlacer(cluster_map)
    if algo == Algorithm.RING:
        return RingPlacer(cluster_map, config.PLACEMENT_VNODES if virtual_nodes is None else virtual_nodes)
    return StrawPlacer(cluster_map)


def uniform_map(nodes: int, capacity: float = 1.0) -> ClusterMap:
    """Map of ``nodes`` equal nodes with ids ``0..nodes-1``."""
    return ClusterMap.from_specs((NodeSpec(id=i, capacity=capacity) for i in range(nodes)), unit=1.0)


def capacity_map(capacities: Sequence[float]) -> ClusterMap:
    """Map with node ``i`` of capacity ``capacities[i]``."""
    return ClusterMap.from_specs((NodeSpec(id=i, capacity=c) for i, c in enumerate(capacities)), unit=1.0)
