"""
ASURA lookup: cascaded random numbers, data-storing node selection,
replica selection and churn metadata.

A datum's ASURA numbers come from a cascade of generators whose ranges are
``S * 2**level``. Lookup starts at the widest level needed to cover the number
line and descends while the draw falls into the lower half, so the numbers
below any bound form the same subsequence whatever the cascade height. That
is what makes placements move only onto added segments or off removed ones.
"""

from typing import Dict, Iterable, List, Optional, Protocol, Sequence, Tuple

from ..models import ChurnMetadata, DrawTrace, MoveDecision, Placement, Selection
from ..utils.config import config
from ..utils.errors import (
    DegenerateMapError,
    EmptyMapError,
    ExtensionLimitError,
    InsufficientNodesError,
    NumberSourceExhaustedError,
)
from .cluster_map import ClusterMap
from .prng import Generator, integer_at, seed_from

# Salt mixed with the datum id to seed the master generator.
ASURA_SALT = 0
# Growth factor between cascade levels; the cascade itself is written for doubling.
ASURA_ALPHA = 2


class NumberSource(Protocol):
    """Anything that yields ASURA numbers; production sources and scripted test sequences."""

    draws: int

    def next_number(self) -> float: ...

    def extended(self, doublings: int) -> "NumberSource": ...


def cascade_shape(max_segment_number_plus_1: int, default_max: Optional[int] = None) -> Tuple[int, int]:
    """``(c_max, loop_max)``: keep doubling from the default maximum until the line is covered."""
    c_max = config.ASURA_DEFAULT_MAX_RANDOM if default_max is None else default_max
    loop_max = 0
    while c_max < max_segment_number_plus_1:
        c_max *= 2
        loop_max += 1
    return c_max, loop_max


class AsuraNumberSource:
    """
    Per-datum cascade state.

    Level ``i`` draws from ``[0, S * 2**i)``. Its generator is seeded with the
    i-th integer of a master generator seeded by the datum id, is created the
    first time the level is visited, and keeps its position across retries.

    With ``reject=False`` draws at or above ``max_segment_number_plus_1`` are
    surfaced instead of being redrawn; ``extra_levels`` adds doublings on top.
    Both are used only to extend the range when looking for an addition number.
    """

    __slots__ = (
        "datum_id",
        "max_segment_number_plus_1",
        "default_max",
        "c_max",
        "loop_max",
        "draws",
        "_master_seed",
        "_levels",
        "_limit",
    )

    def __init__(
        self,
        datum_id: int,
        max_segment_number_plus_1: int,
        default_max: Optional[int] = None,
        extra_levels: int = 0,
        reject: bool = True,
    ):
        if max_segment_number_plus_1 < 1:
            raise EmptyMapError("cannot build a number source for an empty map")
        self.datum_id = datum_id
        self.max_segment_number_plus_1 = max_segment_number_plus_1
        self.default_max = config.ASURA_DEFAULT_MAX_RANDOM if default_max is None else default_max
        c_max, loop_max = cascade_shape(max_segment_number_plus_1, self.default_max)
        self.c_max = c_max << extra_levels
        self.loop_max = loop_max + extra_levels
        self.draws = 0
        self._master_seed = seed_from(datum_id, ASURA_SALT)
        self._levels: List[Optional[Generator]] = [None] * (self.loop_max + 1)
        self._limit = max_segment_number_plus_1 if reject else self.c_max

    @property
    def level_seeds(self) -> List[int]:
        """Seeds for levels ``0..loop_max``, in the order the master generator emits them."""
        return [integer_at(self._master_seed, level) for level in range(self.loop_max + 1)]

    @property
    def used_flags(self) -> List[bool]:
        return [generator is not None for generator in self._levels]

    def next_number(self) -> float:
        levels = self._levels
        limit = self._limit
        c = self.c_max
        loop = self.loop_max
        while True:
            generator = levels[loop]
            if generator is None:
                generator = levels[loop] = Generator(integer_at(self._master_seed, loop))
            result = generator.next_uniform() * c
            self.draws += 1
            while result >= limit:
                result = generator.next_uniform() * c
                self.draws += 1
            c >>= 1
            if result >= c or loop == 0:
                return result
            loop -= 1

    def extended(self, doublings: int) -> "AsuraNumberSource":
        """Fresh replay of this datum's sequence without rejection, ``doublings`` levels wider."""
        return AsuraNumberSource(
            self.datum_id,
            self.max_segment_number_plus_1,
            default_max=self.default_max,
            extra_levels=doublings,
            reject=False,
        )

    def __iter__(self):
        while True:
            yield self.next_number()


class ScriptedNumbers:
    """
    Fixed number sequence standing in for a cascade.

    ``extensions[j]`` is what ``extended(j)`` replays; asking for an extension
    that was not scripted, or reading past the end, raises
    ``NumberSourceExhaustedError``.
    """

    def __init__(self, values: Iterable[float], extensions: Sequence[Iterable[float]] = ()):
        self._values = list(values)
        self._position = 0
        self._extensions = [list(e) for e in extensions]
        self.draws = 0

    def next_number(self) -> float:
        if self._position >= len(self._values):
            raise NumberSourceExhaustedError(f"scripted sequence ended after {len(self._values)} numbers")
        value = self._values[self._position]
        self._position += 1
        self.draws += 1
        return value

    def extended(self, doublings: int) -> "ScriptedNumbers":
        if doublings >= len(self._extensions):
            raise NumberSourceExhaustedError(f"no scripted extension for {doublings} doublings")
        return ScriptedNumbers(self._extensions[doublings])


def build_source(datum_id: int, max_segment_number_plus_1: int) -> AsuraNumberSource:
    return AsuraNumberSource(datum_id, max_segment_number_plus_1)


def next_asura_number(source: AsuraNumberSource, max_segment_number_plus_1: Optional[int] = None) -> float:
    if max_segment_number_plus_1 is not None and max_segment_number_plus_1 != source.max_segment_number_plus_1:
        raise ValueError(
            f"source built for {source.max_segment_number_plus_1}, asked for {max_segment_number_plus_1}"
        )
    return source.next_number()


def _walk(
    numbers: NumberSource,
    cluster_map: ClusterMap,
    k: int,
) -> Tuple[List[Tuple[int, int]], List[float], List[int]]:
    """Draw until ``k`` distinct owners are hit; returns selections, every drawn value and hit positions."""
    lengths = cluster_map.lengths
    owners = cluster_map.owners
    size = len(lengths)
    selections: List[Tuple[int, int]] = []
    chosen = set()
    drawn: List[float] = []
    hit_indices: List[int] = []
    while len(selections) < k:
        value = numbers.next_number()
        drawn.append(value)
        number = int(value)
        if number < size and value < number + lengths[number]:
            owner = owners[number]
            if owner not in chosen:
                chosen.add(owner)
                selections.append((number, owner))
                hit_indices.append(len(drawn) - 1)
    return selections, drawn, hit_indices


def _check_lookup(cluster_map: ClusterMap, k: int) -> None:
    if cluster_map.is_empty:
        raise EmptyMapError("lookup against an empty cluster map")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > cluster_map.node_count:
        raise InsufficientNodesError(f"asked for {k} replicas, map has {cluster_map.node_count} nodes")


def _source_for(datum_id: int, cluster_map: ClusterMap, numbers: Optional[NumberSource]) -> NumberSource:
    if numbers is not None:
        return numbers
    return AsuraNumberSource(datum_id, cluster_map.max_segment_number_plus_1)


def asura_lookup(
    datum_id: int,
    cluster_map: ClusterMap,
    numbers: Optional[NumberSource] = None,
) -> Tuple[int, int]:
    """``(segment number, node id)`` of the data-storing node."""
    if cluster_map.is_empty:
        raise EmptyMapError("lookup against an empty cluster map")
    source = _source_for(datum_id, cluster_map, numbers)
    lengths = cluster_map.lengths
    size = len(lengths)
    while True:
        value = source.next_number()
        number = int(value)
        if number < size and value < number + lengths[number]:
            return number, cluster_map.owners[number]


def asura_trace(
    datum_id: int,
    cluster_map: ClusterMap,
    k: int = 1,
    numbers: Optional[NumberSource] = None,
) -> Tuple[Placement, DrawTrace]:
    _check_lookup(cluster_map, k)
    source = _source_for(datum_id, cluster_map, numbers)
    selections, drawn, hit_indices = _walk(source, cluster_map, k)
    placement = Placement(
        selections=[Selection(segment=s, node=n) for s, n in selections],
        epoch=cluster_map.epoch,
    )
    return placement, DrawTrace(drawn=drawn, hit_indices=hit_indices)


def asura_lookup_k(
    datum_id: int,
    cluster_map: ClusterMap,
    k: int,
    numbers: Optional[NumberSource] = None,
) -> Placement:
    """First ``k`` hits with distinct owners, in draw order."""
    placement, _ = asura_trace(datum_id, cluster_map, k, numbers)
    return placement


def _addition_candidate(values: List[float], lengths: List[float]) -> Optional[int]:
    """Floor of the smallest value whose floor is an unassigned segment number."""
    size = len(lengths)
    best: Optional[float] = None
    for value in values:
        number = int(value)
        if (number >= size or lengths[number] == 0.0) and (best is None or value < best):
            best = value
    return None if best is None else int(best)


def lookup_with_metadata(
    datum_id: int,
    cluster_map: ClusterMap,
    k: int = 1,
    numbers: Optional[NumberSource] = None,
    extension_limit: Optional[int] = None,
) -> Tuple[Placement, ChurnMetadata]:
    """Placement and churn metadata from a single draw sequence."""
    _check_lookup(cluster_map, k)
    if extension_limit is None:
        extension_limit = config.ASURA_EXTENSION_LIMIT

    source = _source_for(datum_id, cluster_map, numbers)
    selections, drawn, hit_indices = _walk(source, cluster_map, k)
    lengths = cluster_map.lengths
    addition = _addition_candidate(drawn[:hit_indices[-1]], lengths)

    doublings = 0
    while addition is None:
        if doublings > extension_limit:
            raise ExtensionLimitError(
                f"datum {datum_id}: no addition number after {extension_limit} extra doublings"
            )
        replay = source.extended(doublings)
        _, replay_drawn, replay_hits = _walk(replay, cluster_map, k)
        addition = _addition_candidate(replay_drawn[:replay_hits[-1]], lengths)
        doublings += 1

    placement = Placement(
        selections=[Selection(segment=s, node=n) for s, n in selections],
        epoch=cluster_map.epoch,
    )
    metadata = ChurnMetadata(addition_number=addition, remove_numbers=[s for s, _ in selections])
    return placement, metadata


def churn_metadata(
    datum_id: int,
    cluster_map: ClusterMap,
    k: int = 1,
    numbers: Optional[NumberSource] = None,
) -> ChurnMetadata:
    """ADDITION NUMBER and REMOVE NUMBERS for a stored datum."""
    _, metadata = lookup_with_metadata(datum_id, cluster_map, k, numbers)
    return metadata


def moves_on_add(metadata: ChurnMetadata, added_segment: int) -> MoveDecision:
    if added_segment == metadata.addition_number:
        return MoveDecision.RECHECK
    return MoveDecision.UNAFFECTED


def moves_on_remove(metadata: ChurnMetadata, removed_segments: Iterable[int]) -> MoveDecision:
    removed = set(removed_segments)
    if any(number in removed for number in metadata.remove_numbers):
        return MoveDecision.MUST_RECOMPUTE
    return MoveDecision.UNAFFECTED


def expected_draws(n: float, h: float, S: float = 16.0, alpha: float = 2.0) -> float:
    """
    Expected raw draws per lookup on a line of extent ``n`` with hole length ``h``.

    ``x`` is the number of doublings from ``S`` needed to cover ``n``; the
    result is ``S*alpha**x / (n - h) * (alpha/(alpha-1) - 1/(alpha**x * (alpha-1)))``.
    """
    if S <= 0 or alpha <= 1:
        raise DegenerateMapError(f"need S > 0 and alpha > 1, got S={S}, alpha={alpha}")
    if n <= 0 or h < 0 or h >= n:
        raise DegenerateMapError(f"need 0 <= h < n, got n={n}, h={h}")

    top = S
    x = 0
    while top < n:
        top *= alpha
        x += 1
    cascade = alpha / (alpha - 1) - 1 / (alpha ** x * (alpha - 1))
    return top / (n - h) * cascade


def capacity_share(cluster_map: ClusterMap) -> Dict[int, float]:
    """Expected fraction of data per node: its total segment length over the total."""
    total = cluster_map.total_length
    return {node: cluster_map.node_length(node) / total for node in cluster_map.node_ids}


def draws_per_lookup(datum_id: int, cluster_map: ClusterMap) -> int:
    """Raw draws (rejections included) spent finding the data-storing node."""
    source = AsuraNumberSource(datum_id, cluster_map.max_segment_number_plus_1)
    asura_lookup(datum_id, cluster_map, source)
    return source.draws
