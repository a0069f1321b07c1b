"""Placement package - ASURA and the baseline placement algorithms"""

from .prng import Generator, seed_from, key_to_id, synthetic_ids
from .cluster_map import ClusterMap, segments_for_capacity, add_node, remove_node, memory_account
from .map_file import parse_map, serialize_map, load_map, save_map
from .asura import (
    AsuraNumberSource,
    ScriptedNumbers,
    build_source,
    next_asura_number,
    asura_lookup,
    asura_lookup_k,
    asura_trace,
    churn_metadata,
    lookup_with_metadata,
    moves_on_add,
    moves_on_remove,
    expected_draws,
)
from .ring import HashRing, ring_build, ring_lookup
from .straw import StrawSet, StrawMemo, straw_lookup, straw_lookup_k

__all__ = [
    "Generator",
    "seed_from",
    "key_to_id",
    "synthetic_ids",
    "ClusterMap",
    "segments_for_capacity",
    "add_node",
    "remove_node",
    "memory_account",
    "parse_map",
    "serialize_map",
    "load_map",
    "save_map",
    "AsuraNumberSource",
    "ScriptedNumbers",
    "build_source",
    "next_asura_number",
    "asura_lookup",
    "asura_lookup_k",
    "asura_trace",
    "churn_metadata",
    "lookup_with_metadata",
    "moves_on_add",
    "moves_on_remove",
    "expected_draws",
    "HashRing",
    "ring_build",
    "ring_lookup",
    "StrawSet",
    "StrawMemo",
    "straw_lookup",
    "straw_lookup_k",
]
