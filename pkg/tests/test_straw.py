"""
Tests for Straw Buckets
"""

import pytest

from src.models import MoveDecision
from src.placement import StrawMemo, StrawSet, straw_lookup, straw_lookup_k
from src.utils.errors import EmptyMapError, InsufficientNodesError

from .conftest import A, B, C, D

# straws per datum for nodes A, B, C and D
STRAWS = {
    "datum_a": (1, 5, 123, 23),
    "datum_f": (121, 127, 112, 111),
}
DATUM_IDS = {"datum_a": 1, "datum_f": 6}
NODES = [A, B, C, D]


def table_straw(datum_id, node):
    name = next(name for name, value in DATUM_IDS.items() if value == datum_id)
    return STRAWS[name][NODES.index(node)]


@pytest.fixture
def table_straws():
    return StrawSet(NODES, hasher=table_straw)


def test_longest_straw_wins(table_straws):
    assert straw_lookup(table_straws, DATUM_IDS["datum_a"]) == C
    assert straw_lookup(table_straws, DATUM_IDS["datum_f"]) == B


def test_replicas_follow_straw_order(table_straws):
    assert straw_lookup_k(table_straws, DATUM_IDS["datum_a"], 2) == [C, D]
    assert straw_lookup_k(table_straws, DATUM_IDS["datum_f"], 4) == [B, A, C, D]


def test_one_comparison_per_node():
    straws = StrawSet(range(37))
    for datum_id in range(20):
        assert straws.lookup_with_comparisons(datum_id)[1] == 37


def test_ties_go_to_the_smaller_node():
    straws = StrawSet([9, 4, 7], hasher=lambda datum_id, node: 42)
    assert straws.lookup(0) == 4
    assert straws.lookup_k(0, 3) == [4, 7, 9]


def test_golden_lookups():
    straws = StrawSet(range(5))
    assert [straws.lookup(i) for i in range(8)] == [3, 3, 3, 1, 3, 0, 0, 2]


def test_membership_changes_are_optimal():
    before = StrawSet(range(10))
    grown = before.with_node(10)
    shrunk = before.without_node(3)
    for datum_id in range(500):
        old = before.lookup(datum_id)
        assert grown.lookup(datum_id) in (old, 10)
        assert old == 3 or shrunk.lookup(datum_id) == old


def test_memo_decisions(table_straws):
    memo = StrawMemo(table_straws, DATUM_IDS["datum_a"], k=2)
    assert memo.nodes == [C, D]
    assert memo.threshold == 23
    assert memo.moves_on_remove(D) == MoveDecision.MUST_RECOMPUTE
    assert memo.moves_on_remove(A) == MoveDecision.UNAFFECTED

    grown = StrawSet(range(10)).with_node(10)
    for datum_id in range(200):
        memo = StrawMemo(StrawSet(range(10)), datum_id)
        moved = grown.lookup(datum_id) == 10
        flagged = memo.moves_on_add(grown, datum_id, 10) == MoveDecision.MUST_RECOMPUTE
        assert moved == flagged


def test_errors():
    with pytest.raises(EmptyMapError):
        StrawSet([]).lookup(1)
    with pytest.raises(InsufficientNodesError):
        StrawSet([1, 2]).lookup_k(1, 3)
