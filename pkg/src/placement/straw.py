"""
Straw Buckets (uniform weights).

Each node draws a per-datum straw ``seed_from(datum_id, node_id)``; the
longest straw wins, ties going to the smaller node id. Replicas are the next
longest straws.
"""

from typing import Callable, Iterable, List, Optional, Tuple

from ..models import MoveDecision
from ..utils.errors import EmptyMapError, InsufficientNodesError, NodeAlreadyPresentError, NodeNotFoundError
from .prng import seed_from

Hasher = Callable[[int, int], int]


def default_straw(datum_id: int, node: int) -> int:
    return seed_from(datum_id, node)


class StrawSet:
    """Distinct node ids plus the straw function (injectable for worked examples)."""

    def __init__(self, nodes: Iterable[int], hasher: Optional[Hasher] = None):
        self.nodes: List[int] = []
        seen = set()
        for node in nodes:
            if node in seen:
                raise NodeAlreadyPresentError(node)
            seen.add(node)
            self.nodes.append(node)
        self.hasher: Hasher = hasher or default_straw

    def __len__(self) -> int:
        return len(self.nodes)

    def lookup_with_comparisons(self, datum_id: int) -> Tuple[int, int]:
        """``(winner, comparisons)``; one comparison per node, maximum kept on the fly."""
        if not self.nodes:
            raise EmptyMapError("lookup against an empty straw set")
        hasher = self.hasher
        winner = -1
        best = -1
        comparisons = 0
        for node in self.nodes:
            straw = hasher(datum_id, node)
            comparisons += 1
            if straw > best or (straw == best and node < winner):
                best, winner = straw, node
        return winner, comparisons

    def lookup(self, datum_id: int) -> int:
        return self.lookup_with_comparisons(datum_id)[0]

    def ranked(self, datum_id: int) -> List[Tuple[int, int]]:
        """``(straw, node)`` pairs, longest straw first."""
        return sorted(((self.hasher(datum_id, n), n) for n in self.nodes), key=lambda p: (-p[0], p[1]))

    def lookup_k(self, datum_id: int, k: int) -> List[int]:
        if not self.nodes:
            raise EmptyMapError("lookup against an empty straw set")
        if k > len(self.nodes):
            raise InsufficientNodesError(f"asked for {k} replicas, straw set has {len(self.nodes)} nodes")
        return [node for _, node in self.ranked(datum_id)[:k]]

    def with_node(self, node: int) -> "StrawSet":
        if node in self.nodes:
            raise NodeAlreadyPresentError(node)
        return StrawSet(self.nodes + [node], self.hasher)

    def without_node(self, node: int) -> "StrawSet":
        if node not in self.nodes:
            raise NodeNotFoundError(node)
        return StrawSet([n for n in self.nodes if n != node], self.hasher)


def straw_lookup(straws: StrawSet, datum_id: int) -> int:
    return straws.lookup(datum_id)


def straw_lookup_k(straws: StrawSet, datum_id: int, k: int) -> List[int]:
    return straws.lookup_k(datum_id, k)


class StrawMemo:
    """
    Movement bookkeeping for one datum: the shortest winning straw and the
    selected nodes. An added node matters only if its straw beats the
    remembered one; a removal matters only for the selected nodes.
    """

    __slots__ = ("threshold", "threshold_node", "nodes")

    def __init__(self, straws: StrawSet, datum_id: int, k: int = 1):
        ranked = straws.ranked(datum_id)
        if k > len(ranked):
            raise InsufficientNodesError(f"asked for {k} replicas, straw set has {len(ranked)} nodes")
        self.threshold, self.threshold_node = ranked[k - 1]
        self.nodes = [node for _, node in ranked[:k]]

    def moves_on_add(self, straws: StrawSet, datum_id: int, node: int) -> MoveDecision:
        straw = straws.hasher(datum_id, node)
        if straw > self.threshold or (straw == self.threshold and node < self.threshold_node):
            return MoveDecision.MUST_RECOMPUTE
        return MoveDecision.UNAFFECTED

    def moves_on_remove(self, node: int) -> MoveDecision:
        return MoveDecision.MUST_RECOMPUTE if node in self.nodes else MoveDecision.UNAFFECTED
