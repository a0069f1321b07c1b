"""
Vectorized placement for experiment-sized corpora.

Each function reproduces its scalar counterpart bit for bit using numpy
uint64 arithmetic (which wraps modulo 2**64), so experiments over millions of
ids stay at desk scale. The scalar functions in ``src.placement`` remain the
reference; tests compare the two.
"""

from typing import Sequence, Tuple

import numpy as np

from ..placement.asura import ASURA_SALT, cascade_shape
from ..placement.cluster_map import ClusterMap
from ..placement.prng import GOLDEN_GAMMA, MIX_MUL_1, MIX_MUL_2
from ..placement.ring import RING_SALT, HashRing
from ..placement.straw import StrawSet, default_straw
from ..utils.errors import EmptyMapError

U64 = np.uint64
_GAMMA = U64(GOLDEN_GAMMA)
_MUL_1 = U64(MIX_MUL_1)
_MUL_2 = U64(MIX_MUL_2)
_FLOAT_SCALE = 1.0 / (1 << 53)

CHUNK = 1 << 18


def mix64(state: np.ndarray) -> np.ndarray:
    z = state + _GAMMA
    z = (z ^ (z >> U64(30))) * _MUL_1
    z = (z ^ (z >> U64(27))) * _MUL_2
    return z ^ (z >> U64(31))


def seed_from(datum_ids: np.ndarray, salt: int) -> np.ndarray:
    salt &= 0xFFFFFFFFFFFFFFFF
    rotated = ((salt << 32) | (salt >> 32)) & 0xFFFFFFFFFFFFFFFF
    return mix64(mix64(datum_ids.astype(np.uint64) ^ U64(rotated)))


def integer_at(seeds: np.ndarray, index: np.ndarray) -> np.ndarray:
    return mix64(seeds + index.astype(np.uint64) * _GAMMA)


def synthetic_ids(count: int, seed: int = 0) -> np.ndarray:
    return seed_from(np.arange(count, dtype=np.uint64), seed)


def asura_locate(datum_ids: np.ndarray, cluster_map: ClusterMap) -> Tuple[np.ndarray, np.ndarray]:
    """``(segment numbers, raw draw counts)`` for every id; same results as ``asura_lookup``."""
    if cluster_map.is_empty:
        raise EmptyMapError("lookup against an empty cluster map")
    datum_ids = np.asarray(datum_ids, dtype=np.uint64)
    segments = np.empty(len(datum_ids), dtype=np.int64)
    draws = np.empty(len(datum_ids), dtype=np.int64)
    for start in range(0, len(datum_ids), CHUNK):
        stop = start + CHUNK
        segments[start:stop], draws[start:stop] = _asura_chunk(datum_ids[start:stop], cluster_map)
    return segments, draws


def _asura_chunk(datum_ids: np.ndarray, cluster_map: ClusterMap) -> Tuple[np.ndarray, np.ndarray]:
    lengths = np.asarray(cluster_map.lengths, dtype=np.float64)
    size = len(lengths)
    c_max, loop_max = cascade_shape(size)
    n = len(datum_ids)

    master = seed_from(datum_ids, ASURA_SALT)
    # per-id, per-level count of draws already taken from that level's generator
    taken = np.zeros((n, loop_max + 1), dtype=np.uint64)
    level = np.full(n, loop_max, dtype=np.int64)
    width = np.full(n, float(c_max))
    draws = np.zeros(n, dtype=np.int64)
    segments = np.full(n, -1, dtype=np.int64)
    active = np.arange(n)

    while active.size:
        lv = level[active]
        seeds = integer_at(master[active], lv)
        z = integer_at(seeds, taken[active, lv])
        taken[active, lv] += U64(1)
        draws[active] += 1
        c = width[active]
        result = (z >> U64(11)).astype(np.float64) * _FLOAT_SCALE * c

        accepted = result < size
        half = c / 2
        surfaced = accepted & ((result >= half) | (lv == 0))
        descend = accepted & ~surfaced

        number = np.minimum(result.astype(np.int64), size - 1)
        hit = surfaced & (result < size) & (result < number + lengths[number])

        done = active[hit]
        segments[done] = number[hit]

        down = active[descend]
        level[down] -= 1
        width[down] = half[descend]

        restart = active[surfaced & ~hit]
        level[restart] = loop_max
        width[restart] = float(c_max)

        active = active[~hit]

    return segments, draws


def asura_nodes(datum_ids: np.ndarray, cluster_map: ClusterMap) -> Tuple[np.ndarray, np.ndarray]:
    """``(node ids, raw draw counts)`` for every id."""
    segments, draws = asura_locate(datum_ids, cluster_map)
    owners = np.asarray([-1 if o is None else o for o in cluster_map.owners], dtype=np.int64)
    return owners[segments], draws


def ring_nodes(datum_ids: np.ndarray, ring: HashRing) -> np.ndarray:
    if not len(ring):
        raise EmptyMapError("lookup against an empty ring")
    hashes = np.asarray([h for h, _ in ring.points], dtype=np.uint64)
    owners = np.asarray([n for _, n in ring.points], dtype=np.int64)
    datum_hashes = seed_from(np.asarray(datum_ids, dtype=np.uint64), RING_SALT)
    index = np.searchsorted(hashes, datum_hashes, side="left")
    index[index == len(hashes)] = 0
    return owners[index]


def straw_nodes(datum_ids: np.ndarray, straws: StrawSet) -> np.ndarray:
    if not len(straws):
        raise EmptyMapError("lookup against an empty straw set")
    if straws.hasher is not default_straw:
        raise ValueError("vectorized straw lookup needs the default straw function")
    datum_ids = np.asarray(datum_ids, dtype=np.uint64)
    best = np.zeros(len(datum_ids), dtype=np.uint64)
    winner = np.full(len(datum_ids), -1, dtype=np.int64)
    # ascending node order: a later node needs a strictly longer straw, so ties keep the smaller id
    for node in sorted(straws.nodes):
        straw = seed_from(datum_ids, node)
        better = (straw > best) | (winner < 0)
        best[better] = straw[better]
        winner[better] = node
    return winner


def counts_by_node(nodes: np.ndarray, node_ids: Sequence[int]) -> np.ndarray:
    """Data count per node, in the order of ``node_ids``."""
    order = np.asarray(list(node_ids), dtype=np.int64)
    sorter = np.argsort(order)
    index = sorter[np.searchsorted(order, nodes, sorter=sorter)]
    return np.bincount(index, minlength=len(order))
