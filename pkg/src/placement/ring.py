"""
Consistent Hashing with virtual nodes.

Every node contributes ``V`` points to a 64-bit ring; a datum belongs to the
owner of the first point at or after its own hash, wrapping past the top.
"""

from bisect import bisect_left
from typing import Iterable, List, Optional, Tuple

from ..utils.config import config
from ..utils.errors import EmptyMapError, InsufficientNodesError, NodeAlreadyPresentError, NodeNotFoundError
from .prng import mix64, seed_from

# Salt mixed with the datum id to place it on the ring.
RING_SALT = 1


def point_hash(node: int, index: int) -> int:
    return mix64(seed_from(node, index))


def datum_hash(datum_id: int) -> int:
    return seed_from(datum_id, RING_SALT)


class HashRing:
    """Sorted ``(hash, node)`` points; ties on hash are ordered by node id."""

    def __init__(self, nodes: Iterable[int], virtual_nodes: Optional[int] = None):
        if virtual_nodes is None:
            virtual_nodes = config.PLACEMENT_VNODES
        if virtual_nodes < 1:
            raise ValueError(f"virtual_nodes must be >= 1, got {virtual_nodes}")

        node_ids: List[int] = []
        seen = set()
        for node in nodes:
            if node in seen:
                raise NodeAlreadyPresentError(node)
            seen.add(node)
            node_ids.append(node)

        self.virtual_nodes = virtual_nodes
        self.node_ids = sorted(node_ids)
        self.points: List[Tuple[int, int]] = sorted(
            (point_hash(node, i), node) for node in node_ids for i in range(virtual_nodes)
        )
        self._hashes = [h for h, _ in self.points]
        self._owners = [n for _, n in self.points]

    def __len__(self) -> int:
        return len(self.points)

    def _successor(self, h: int) -> int:
        index = bisect_left(self._hashes, h)
        return 0 if index == len(self._hashes) else index

    def lookup(self, datum_id: int) -> int:
        if not self.points:
            raise EmptyMapError("lookup against an empty ring")
        return self._owners[self._successor(datum_hash(datum_id))]

    def probe_depth(self, datum_id: int) -> Tuple[int, int]:
        """``(owner, binary-search iterations)`` for a datum."""
        if not self.points:
            raise EmptyMapError("lookup against an empty ring")
        h = datum_hash(datum_id)
        hashes = self._hashes
        lo, hi, probes = 0, len(hashes), 0
        while lo < hi:
            probes += 1
            mid = (lo + hi) // 2
            if hashes[mid] < h:
                lo = mid + 1
            else:
                hi = mid
        return self._owners[0 if lo == len(hashes) else lo], probes

    def linear_lookup(self, datum_id: int) -> int:
        """Full scan for the successor point; reference for ``lookup``."""
        if not self.points:
            raise EmptyMapError("lookup against an empty ring")
        h = datum_hash(datum_id)
        for point_h, owner in self.points:
            if point_h >= h:
                return owner
        return self.points[0][1]

    def lookup_k(self, datum_id: int, k: int) -> List[int]:
        """Walk clockwise from the datum's successor, skipping owners already chosen."""
        if not self.points:
            raise EmptyMapError("lookup against an empty ring")
        if k > len(self.node_ids):
            raise InsufficientNodesError(f"asked for {k} replicas, ring has {len(self.node_ids)} nodes")
        start = self._successor(datum_hash(datum_id))
        chosen: List[int] = []
        for offset in range(len(self._owners)):
            owner = self._owners[(start + offset) % len(self._owners)]
            if owner not in chosen:
                chosen.append(owner)
                if len(chosen) == k:
                    break
        return chosen

    def with_node(self, node: int) -> "HashRing":
        if node in self.node_ids:
            raise NodeAlreadyPresentError(node)
        return HashRing(self.node_ids + [node], self.virtual_nodes)

    def without_node(self, node: int) -> "HashRing":
        if node not in self.node_ids:
            raise NodeNotFoundError(node)
        return HashRing([n for n in self.node_ids if n != node], self.virtual_nodes)


def ring_build(nodes: Iterable[int], virtual_nodes: Optional[int] = None) -> HashRing:
    return HashRing(nodes, virtual_nodes)


def ring_lookup(ring: HashRing, datum_id: int) -> int:
    return ring.lookup(datum_id)
