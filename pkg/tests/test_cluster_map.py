"""
Tests for cluster maps: segment assignment, epochs and memory accounting
"""

import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from src.models import Algorithm, NodeSpec, Segment
from src.placement import ClusterMap, memory_account, segments_for_capacity
from src.utils.errors import InvalidCapacityError, NodeAlreadyPresentError, NodeNotFoundError

from .conftest import A, B, C, D


def test_segments_for_capacity():
    assert segments_for_capacity(2.5, 1.0) == [1.0, 1.0, 0.5]
    assert segments_for_capacity(0.3, 1.0) == [0.3]
    assert segments_for_capacity(3.0, 1.0) == [1.0, 1.0, 1.0]
    assert segments_for_capacity(150.0, 100.0) == [1.0, 0.5]


@pytest.mark.parametrize("capacity, unit", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_segments_for_capacity_rejects_non_positive(capacity, unit):
    with pytest.raises(InvalidCapacityError):
        segments_for_capacity(capacity, unit)


def test_add_node_takes_smallest_unused_numbers(three_node_map):
    after = three_node_map.add_node(NodeSpec(id=D, capacity=1.0))
    assert after.segments_of(D) == [4]
    assert after.epoch == three_node_map.epoch + 1

    holed = three_node_map.remove_node(C)
    refilled = holed.add_node(NodeSpec(id=D, capacity=1.5))
    assert refilled.segments_of(D) == [1, 4]
    assert refilled.lengths[1] == 1.0
    assert refilled.lengths[4] == 0.5


def test_remove_node_leaves_a_hole(three_node_map):
    after = three_node_map.remove_node(C)
    assert after.owner_of(1) is None
    assert after.lengths == [1.0, 0.0, 0.5, 0.7]
    assert after.segments_of(A) == [0, 2]
    assert after.hole_length == pytest.approx(1.5)


def test_removing_the_top_segment_shrinks_the_line(three_node_map):
    after = three_node_map.remove_node(B)
    assert after.max_segment_number_plus_1 == 3
    assert after.coverage_extent == 2.5


def test_fixture_extent_and_holes(three_node_map):
    assert three_node_map.coverage_extent == pytest.approx(3.7)
    assert three_node_map.hole_length == pytest.approx(0.5)
    assert three_node_map.hole_length_by_scan() == pytest.approx(0.5)
    assert three_node_map.node_length(A) == 1.5
    assert three_node_map.capacity_of(B) == pytest.approx(0.7)


def test_from_specs_matches_sequential_adds():
    specs = [NodeSpec(id=i, capacity=c) for i, c in enumerate([1.0, 2.5, 0.4, 1.0])]
    built = ClusterMap.from_specs(specs, unit=1.0)
    stepped = ClusterMap.empty(unit=1.0)
    for spec in specs:
        stepped = stepped.add_node(spec)
    assert built.segments == stepped.segments
    assert built.nodes == stepped.nodes
    assert stepped.epoch == len(specs)


def test_duplicate_and_unknown_nodes(three_node_map):
    with pytest.raises(NodeAlreadyPresentError):
        three_node_map.add_node(NodeSpec(id=A, capacity=1.0))
    with pytest.raises(NodeNotFoundError):
        three_node_map.remove_node(D)
    with pytest.raises(NodeNotFoundError):
        three_node_map.segments_of(D)


def test_validator_enforces_conservation():
    with pytest.raises(ValueError):
        ClusterMap(unit=1.0, nodes={A: 2.0}, segments={0: Segment(number=0, length=1.0, owner=A)})
    with pytest.raises(ValueError):
        ClusterMap(unit=1.0, nodes={A: 1.0}, segments={0: Segment(number=0, length=1.0, owner=B)})


def test_validator_reports_unknown_owner_as_validation_error():
    with pytest.raises(ValidationError, match="unknown node 11"):
        ClusterMap(unit=1.0, nodes={A: 1.0}, segments={0: Segment(number=0, length=1.0, owner=B)})


@pytest.mark.parametrize("capacity", [float("nan"), float("inf")])
def test_non_finite_capacities_are_rejected(capacity):
    with pytest.raises(ValidationError):
        ClusterMap(unit=1.0, nodes={A: capacity}, segments={0: Segment(number=0, length=1.0, owner=A)})
    with pytest.raises(ValidationError):
        NodeSpec(id=A, capacity=capacity)
    with pytest.raises(ValidationError):
        ClusterMap(unit=capacity)


def test_unused_numbers():
    holed = ClusterMap.from_segments([(1, 1.0, A), (3, 1.0, B)], unit=1.0)
    assert holed.unused_numbers(4) == [0, 2, 4, 5]
    assert ClusterMap.empty().unused_numbers(2) == [0, 1]


def test_diff_reports_only_changed_numbers(three_node_map):
    after = three_node_map.add_node(NodeSpec(id=D, capacity=1.0))
    changes = after.diff(three_node_map)
    assert list(changes) == [4]
    assert changes[4][1] is None


def test_memory_account_model():
    cluster_map = ClusterMap.from_specs((NodeSpec(id=i, capacity=1.0) for i in range(10_000)), unit=1.0)
    assert memory_account(cluster_map, Algorithm.ASURA) == 80_000
    assert memory_account(cluster_map, Algorithm.RING, virtual_nodes=100) == 8_000_000
    assert memory_account(cluster_map, Algorithm.STRAW) == 40_000


@st.composite
def churn_sequences(draw):
    capacities = draw(st.lists(st.sampled_from([0.3, 1.0, 1.5, 2.0]), min_size=2, max_size=6))
    events = draw(st.lists(st.tuples(st.booleans(), st.integers(0, 50), st.sampled_from([0.5, 1.0, 2.5])),
                           max_size=8))
    return capacities, events


@settings(max_examples=50, deadline=None)
@given(churn_sequences())
def test_churn_touches_only_the_changed_node(sequence):
    capacities, events = sequence
    cluster_map = ClusterMap.from_specs((NodeSpec(id=i, capacity=c) for i, c in enumerate(capacities)), unit=1.0)
    next_id = len(capacities)
    for is_add, pick, capacity in events:
        if is_add or cluster_map.node_count == 1:
            after = cluster_map.add_node(NodeSpec(id=next_id, capacity=capacity))
            changed = next_id
            next_id += 1
        else:
            changed = cluster_map.node_ids[pick % cluster_map.node_count]
            after = cluster_map.remove_node(changed)
        for before_seg, after_seg in after.diff(cluster_map).values():
            assert (after_seg or before_seg).owner == changed
        assert after.hole_length == pytest.approx(after.hole_length_by_scan(), abs=1e-9)
        cluster_map = after
