"""
Tests that the vectorized placement paths agree with the scalar ones
"""

import numpy as np
import pytest

from src.harness import bulk
from src.models import NodeSpec
from src.placement import ClusterMap, HashRing, StrawSet, asura_lookup, seed_from, synthetic_ids
from src.placement.asura import draws_per_lookup
from src.utils.errors import EmptyMapError


def test_seed_mixing_matches_scalar():
    ids = np.array([0, 1, 42, 2**64 - 1], dtype=np.uint64)
    for salt in (0, 1, 7, 2**40 + 3):
        assert bulk.seed_from(ids, salt).tolist() == [seed_from(int(i), salt) for i in ids.tolist()]
    assert bulk.synthetic_ids(50, 9).tolist() == list(synthetic_ids(50, 9))


@pytest.mark.parametrize("capacities", [[1.0] * 5, [0.4, 2.5, 1.0, 0.7], [1.0] * 40])
def test_asura_matches_scalar(capacities):
    cluster_map = ClusterMap.from_specs((NodeSpec(id=i, capacity=c) for i, c in enumerate(capacities)), unit=1.0)
    cluster_map = cluster_map.remove_node(1).remove_node(2)
    ids = bulk.synthetic_ids(2000, 3)
    segments, draws = bulk.asura_locate(ids, cluster_map)
    nodes, _ = bulk.asura_nodes(ids, cluster_map)
    for datum_id, segment, count, node in zip(ids.tolist(), segments.tolist(), draws.tolist(), nodes.tolist()):
        assert (segment, node) == asura_lookup(datum_id, cluster_map)
        assert count == draws_per_lookup(datum_id, cluster_map)


def test_asura_chunks_agree(monkeypatch):
    cluster_map = ClusterMap.from_specs((NodeSpec(id=i, capacity=1.0) for i in range(30)), unit=1.0)
    ids = bulk.synthetic_ids(1000, 0)
    whole, _ = bulk.asura_locate(ids, cluster_map)
    monkeypatch.setattr(bulk, "CHUNK", 64)
    chunked, _ = bulk.asura_locate(ids, cluster_map)
    assert np.array_equal(whole, chunked)


def test_ring_matches_scalar():
    ring = HashRing(range(25), 10)
    ids = bulk.synthetic_ids(3000, 1)
    assert bulk.ring_nodes(ids, ring).tolist() == [ring.lookup(i) for i in ids.tolist()]


def test_straw_matches_scalar():
    straws = StrawSet([5, 3, 11, 8])
    ids = bulk.synthetic_ids(3000, 2)
    assert bulk.straw_nodes(ids, straws).tolist() == [straws.lookup(i) for i in ids.tolist()]


def test_straw_needs_the_default_hasher():
    with pytest.raises(ValueError):
        bulk.straw_nodes(np.arange(3, dtype=np.uint64), StrawSet([1, 2], hasher=lambda d, n: d ^ n))


def test_counts_by_node():
    counts = bulk.counts_by_node(np.array([7, 3, 7, 9, 7]), [9, 7, 3, 4])
    assert counts.tolist() == [1, 3, 1, 0]


def test_empty_inputs_are_rejected():
    with pytest.raises(EmptyMapError):
        bulk.asura_locate(np.arange(3, dtype=np.uint64), ClusterMap.empty())
    with pytest.raises(EmptyMapError):
        bulk.ring_nodes(np.arange(3, dtype=np.uint64), HashRing([], 3))
