"""
Tests for the virtual-node hash ring
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from src.placement import HashRing, ring_build, ring_lookup
from src.utils.errors import EmptyMapError, InsufficientNodesError, NodeAlreadyPresentError, NodeNotFoundError


def test_golden_lookups():
    ring = ring_build([0, 1, 2], virtual_nodes=4)
    assert [ring_lookup(ring, i) for i in range(8)] == [0, 1, 2, 0, 0, 0, 0, 0]


def test_points_are_sorted_and_sized():
    ring = HashRing(range(10), virtual_nodes=7)
    assert len(ring) == 70
    assert ring.points == sorted(ring.points)


@settings(max_examples=50, deadline=None)
@given(st.sets(st.integers(0, 10_000), min_size=1, max_size=20), st.integers(1, 16),
       st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=20))
def test_binary_search_matches_linear_scan(nodes, vnodes, datum_ids):
    ring = HashRing(nodes, vnodes)
    for datum_id in datum_ids:
        owner, probes = ring.probe_depth(datum_id)
        assert owner == ring.lookup(datum_id) == ring.linear_lookup(datum_id)
        assert probes <= math.ceil(math.log2(len(ring))) + 1


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 1000), min_size=2, max_size=12), st.integers(1001, 2000))
def test_adding_a_node_moves_data_only_to_it(nodes, new):
    before = HashRing(nodes, 8)
    after = before.with_node(new)
    for datum_id in range(200):
        assert after.lookup(datum_id) in (before.lookup(datum_id), new)


def test_removing_a_node_moves_only_its_data():
    before = HashRing(range(20), 16)
    after = before.without_node(5)
    for datum_id in range(500):
        old = before.lookup(datum_id)
        assert old == 5 or after.lookup(datum_id) == old


def test_lookup_k_returns_distinct_owners():
    ring = HashRing(range(5), 10)
    for datum_id in range(50):
        owners = ring.lookup_k(datum_id, 3)
        assert len(set(owners)) == 3
        assert owners[0] == ring.lookup(datum_id)


def test_errors():
    with pytest.raises(EmptyMapError):
        HashRing([], 4).lookup(1)
    with pytest.raises(NodeAlreadyPresentError):
        HashRing([1, 1], 4)
    with pytest.raises(ValueError):
        HashRing([1], 0)
    ring = HashRing([1, 2], 4)
    with pytest.raises(InsufficientNodesError):
        ring.lookup_k(0, 3)
    with pytest.raises(NodeAlreadyPresentError):
        ring.with_node(1)
    with pytest.raises(NodeNotFoundError):
        ring.without_node(3)
