"""
Experiments: uniformity, churn movement, draw counts, lookup cost scaling and
the in-process sharding simulation.

Every experiment is a pure function of its arguments and seed; timings are
the only values that differ between reruns.
"""

import statistics
import time
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..models import (
    Algorithm,
    ChurnEvent,
    ChurnEventKind,
    ChurnReport,
    DrawReport,
    NodeSpec,
    ScalingPoint,
    ScalingReport,
    UniformityReport,
)
from ..placement.asura import ASURA_ALPHA, expected_draws
from ..placement.cluster_map import ClusterMap
from ..placement.prng import Generator, key_to_id, seed_from
from ..utils.config import config
from ..utils.errors import InvalidChurnError, InvariantViolationError
from . import bulk
from .placers import Placer, capacity_map, make_placer, uniform_map
from .tracker import MovementTracker

# ops gained per doubling of the problem size below which growth counts as constant
CONSTANT_SLOPE = 0.25


def max_variability(counts: Sequence[float], expected: Optional[Sequence[float]] = None) -> float:
    """Largest relative deviation of a node's count from its expectation, in percent."""
    counts = np.asarray(counts, dtype=np.float64)
    if expected is None:
        expected = np.full(len(counts), counts.mean())
    expected = np.asarray(expected, dtype=np.float64)
    return float(np.max(np.abs(counts - expected) / expected) * 100.0)


def extra_node_percent(variability_percent: float) -> float:
    """Extra nodes, in percent, a distribution with this max variability needs over an ideal one."""
    v = variability_percent / 100.0
    return v / (1.0 - v) * 100.0 if v < 1.0 else float("inf")


def _trial_variability(placer: Placer, datum_ids: np.ndarray) -> float:
    nodes = placer.locate_many(datum_ids)
    counts = bulk.counts_by_node(nodes, placer.node_ids)
    shares = placer.expected_shares()
    expected = [shares[node] * len(datum_ids) for node in placer.node_ids]
    return max_variability(counts, expected)


def _summarize(
    algo: Algorithm,
    placer: Placer,
    nodes: int,
    data_per_node: int,
    per_trial: List[float],
    elapsed: float,
) -> UniformityReport:
    median = statistics.median(per_trial)
    return UniformityReport(
        algo=algo,
        nodes=nodes,
        virtual_nodes=placer.virtual_nodes,
        data_per_node=data_per_node,
        trials=len(per_trial),
        per_trial_percent=per_trial,
        max_variability_percent=max(per_trial),
        mean_percent=statistics.fmean(per_trial),
        median_percent=median,
        stddev_percent=statistics.pstdev(per_trial),
        extra_node_percent=extra_node_percent(median),
        elapsed_seconds=elapsed,
    )


def run_uniformity(
    algo: Algorithm,
    nodes: int,
    virtual_nodes: Optional[int] = None,
    data_per_node: int = 1000,
    trials: int = 20,
    seed: Optional[int] = None,
) -> UniformityReport:
    """Place ``nodes * data_per_node`` synthetic ids per trial on equal nodes and measure max variability."""
    algo = Algorithm(algo)
    seed = config.PLACEMENT_SEED if seed is None else seed
    if nodes < 1 or data_per_node < 1 or trials < 1:
        raise ValueError("nodes, data_per_node and trials must be positive")

    logger.info("uniformity: {} nodes={} data/node={} trials={}", algo.value, nodes, data_per_node, trials)
    started = time.perf_counter()
    placer = make_placer(algo, uniform_map(nodes), virtual_nodes)
    per_trial = []
    for trial in range(trials):
        datum_ids = bulk.synthetic_ids(nodes * data_per_node, seed_from(seed, trial))
        per_trial.append(_trial_variability(placer, datum_ids))
    return _summarize(algo, placer, nodes, data_per_node, per_trial, time.perf_counter() - started)


def parse_events(text: str) -> List[ChurnEvent]:
    """
    Parse a comma-separated event list: ``add:<capacity>`` adds a node,
    ``add:<capacity>@<id>`` adds one with an explicit id, ``remove:<id>``
    removes one.
    """
    events = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        kind, _, argument = item.partition(":")
        if kind == "add":
            capacity, _, node = argument.partition("@")
            events.append(ChurnEvent(kind=ChurnEventKind.ADD, capacity=float(capacity),
                                     node_id=int(node) if node else None))
        elif kind == "remove":
            events.append(ChurnEvent(kind=ChurnEventKind.REMOVE, node_id=int(argument)))
        else:
            raise ValueError(f"unknown churn event {item!r}")
    return events


def _initial_map(initial_nodes: Union[int, Sequence[float]]):
    if isinstance(initial_nodes, int):
        return uniform_map(initial_nodes)
    return capacity_map(initial_nodes)


def resolve_events(node_ids: Iterable[int], events: Iterable[ChurnEvent]) -> List[int]:
    """
    Node id each event acts on, checked against the membership it would see.

    Raises ``InvalidChurnError`` before anything is placed if an event adds a
    node already present, removes an absent one or empties the cluster.
    """
    members = set(node_ids)
    resolved = []
    for event in events:
        if event.kind == ChurnEventKind.ADD:
            node = event.node_id if event.node_id is not None else max(members, default=-1) + 1
            if node in members:
                raise InvalidChurnError(f"node {node} is already in the cluster")
            members.add(node)
        else:
            node = event.node_id
            if node not in members:
                raise InvalidChurnError(f"node {node} is not in the cluster")
            if len(members) == 1:
                raise InvalidChurnError("churn events would leave the cluster empty")
            members.remove(node)
        resolved.append(node)
    return resolved


def run_churn(
    algo: Algorithm,
    initial_nodes: Union[int, Sequence[float]],
    events: Iterable[ChurnEvent],
    ids_count: int,
    seed: Optional[int] = None,
    virtual_nodes: Optional[int] = None,
    track_metadata: bool = True,
    trials: int = 1,
) -> List[ChurnReport]:
    """
    Apply ``events`` in order and report, per event, how many of ``ids_count``
    synthetic ids moved and how many of those moves were not forced by the
    change. For ASURA the movement tracker's metadata checks are scored too.
    Trial ``t`` replays the scenario over the corpus seeded with ``seed + t``.
    """
    algo = Algorithm(algo)
    seed = config.PLACEMENT_SEED if seed is None else seed
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    events = list(events)
    initial_map = _initial_map(initial_nodes)
    targets = resolve_events(initial_map.node_ids, events)

    logger.info("churn: {} with {} events over {} ids, {} trials", algo.value, len(events), ids_count, trials)
    reports = []
    for trial in range(trials):
        placer = make_placer(algo, initial_map, virtual_nodes)
        datum_ids = bulk.synthetic_ids(ids_count, seed + trial)
        tracker = None
        if track_metadata and algo == Algorithm.ASURA:
            tracker = MovementTracker(placer.cluster_map, datum_ids.tolist())
        reports.extend(_replay_churn(placer, tracker, events, targets, datum_ids, trial))
    return reports


def _replay_churn(
    placer: Placer,
    tracker: Optional[MovementTracker],
    events: List[ChurnEvent],
    targets: List[int],
    datum_ids: np.ndarray,
    trial: int,
) -> List[ChurnReport]:
    algo = placer.algo
    owners = placer.locate_many(datum_ids)
    reports = []
    for event, node in zip(events, targets):
        before_shares = placer.expected_shares()
        if event.kind == ChurnEventKind.ADD:
            spec = NodeSpec(id=node, capacity=event.capacity)
            placer = placer.with_node(spec)
            step = tracker.add_node(spec) if tracker else None
            expected = placer.expected_shares()[node]
        else:
            placer = placer.without_node(node)
            step = tracker.remove_node(node) if tracker else None
            expected = before_shares[node]

        new_owners = placer.locate_many(datum_ids)
        moved = owners != new_owners
        if event.kind == ChurnEventKind.ADD:
            misdirected = moved & (new_owners != node)
        else:
            misdirected = moved & (owners != node)

        flagged = false_negatives = None
        if step is not None:
            flagged = len(step.flagged)
            tracked = np.asarray([tracker.placements[d][0] for d in datum_ids.tolist()], dtype=np.int64)
            false_negatives = int(np.count_nonzero(tracked != new_owners))

        report = ChurnReport(
            algo=algo,
            trial=trial,
            event=event.kind,
            node_id=node,
            moved_count=int(moved.sum()),
            total_count=len(datum_ids),
            moved_fraction=float(moved.mean()),
            expected_fraction=expected,
            misdirected_count=int(misdirected.sum()),
            flagged_count=flagged,
            metadata_false_negatives=false_negatives,
        )
        if report.misdirected_count:
            logger.warning("{} {} node {}: {} misdirected moves", algo.value, event.kind.value, node,
                           report.misdirected_count)
        reports.append(report)
        owners = new_owners
    return reports


def check_churn(reports: Iterable[ChurnReport]) -> None:
    """Raise if any report shows a move that optimal movement forbids or a missed metadata flag."""
    for report in reports:
        if report.misdirected_count:
            raise InvariantViolationError(
                f"{report.algo.value}: {report.misdirected_count} misdirected moves on "
                f"{report.event.value} of node {report.node_id}"
            )
        if report.metadata_false_negatives:
            raise InvariantViolationError(
                f"{report.algo.value}: metadata missed {report.metadata_false_negatives} moved data on "
                f"{report.event.value} of node {report.node_id}"
            )


def hole_nodes(node_count: int, hole_fraction: float, seed: int) -> List[int]:
    """Nodes to remove for the requested hole fraction, never the one holding the top segment."""
    removable = list(range(node_count - 1))
    wanted = min(round(hole_fraction * node_count), len(removable))
    generator = Generator(seed_from(seed, node_count))
    chosen = []
    for i in range(wanted):
        j = i + generator.next_integer() % (len(removable) - i)
        removable[i], removable[j] = removable[j], removable[i]
        chosen.append(removable[i])
    return sorted(chosen)


def run_draw_count(
    node_count: int,
    hole_fraction: float = 0.0,
    ids_count: int = 100_000,
    seed: Optional[int] = None,
    trial: int = 0,
) -> DrawReport:
    """
    Measured mean raw draws per lookup against the closed-form expectation.

    The holes depend on ``seed`` only; trial ``t`` draws its ids with ``seed + t``.
    """
    if not 0.0 <= hole_fraction <= 0.9:
        raise ValueError(f"hole_fraction must be in [0, 0.9], got {hole_fraction}")
    if node_count < 1 or ids_count < 1:
        raise ValueError("node_count and ids_count must be positive")
    seed = config.PLACEMENT_SEED if seed is None else seed

    # same map as removing the chosen nodes from uniform_map(node_count) one by one
    removed = set(hole_nodes(node_count, hole_fraction, seed))
    cluster_map = ClusterMap.from_segments(
        ((i, 1.0, i) for i in range(node_count) if i not in removed), unit=1.0
    )

    _, draws = bulk.asura_locate(bulk.synthetic_ids(ids_count, seed + trial), cluster_map)
    n, h = cluster_map.coverage_extent, cluster_map.hole_length
    measured = float(draws.mean())
    predicted = expected_draws(n, h, config.ASURA_DEFAULT_MAX_RANDOM, ASURA_ALPHA)
    logger.info("draws: n={} h={} measured={:.4f} predicted={:.4f}", n, h, measured, predicted)
    return DrawReport(
        trial=trial,
        node_count=cluster_map.node_count,
        n=n,
        h=h,
        ids_count=ids_count,
        measured_mean_draws=measured,
        predicted=predicted,
        relative_error=abs(measured - predicted) / predicted,
    )


def _r_squared(x: np.ndarray, y: np.ndarray) -> float:
    total = float(np.sum((y - y.mean()) ** 2))
    if total == 0.0:
        return 1.0
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    return 1.0 - residual / total


def fit_shape(sizes: Sequence[float], ops: Sequence[float]) -> Tuple[str, float, float]:
    """``(shape, R² linear, R² logarithmic)`` of op counts against problem size."""
    x = np.asarray(sizes, dtype=np.float64)
    y = np.asarray(ops, dtype=np.float64)
    if len(x) < 2:
        return "constant", 1.0, 1.0
    linear = _r_squared(x, y)
    logarithmic = _r_squared(np.log2(x), y)
    if np.polyfit(np.log2(x), y, 1)[0] < CONSTANT_SLOPE:
        return "constant", linear, logarithmic
    return ("logarithmic" if logarithmic >= linear else "linear"), linear, logarithmic


def run_scaling(
    algos: Iterable[Algorithm],
    node_counts: Sequence[int],
    lookups_per_point: int = 1000,
    virtual_nodes: Optional[int] = None,
    seed: Optional[int] = None,
    trials: int = 1,
) -> List[ScalingReport]:
    """
    Per-lookup wall time and internal op counts as the cluster grows.

    Wall time is averaged over ``trials`` timed passes; op counts are
    deterministic and measured once.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if list(node_counts) != sorted(node_counts):
        raise ValueError("node_counts must be ascending")
    seed = config.PLACEMENT_SEED if seed is None else seed
    datum_ids = bulk.synthetic_ids(lookups_per_point, seed).tolist()

    reports = []
    for algo in algos:
        algo = Algorithm(algo)
        points = []
        placer = None
        for count in node_counts:
            placer = make_placer(algo, uniform_map(count), virtual_nodes)
            started = time.perf_counter()
            for _ in range(trials):
                for datum_id in datum_ids:
                    placer.locate(datum_id)
            wall_us = (time.perf_counter() - started) / (trials * len(datum_ids)) * 1e6
            ops = [placer.locate_with_ops(datum_id)[1] for datum_id in datum_ids]
            points.append(ScalingPoint(nodes=count, mean_wall_us=wall_us, mean_ops=statistics.fmean(ops),
                                       max_ops=max(ops)))
            logger.info("scaling: {} nodes={} ops={:.3f} wall={:.2f}us", algo.value, count,
                        points[-1].mean_ops, wall_us)

        vnodes = placer.virtual_nodes if placer else 0
        sizes = [p.nodes * max(1, vnodes) for p in points]
        shape, r2_linear, r2_log = fit_shape(sizes, [p.mean_ops for p in points])
        reports.append(ScalingReport(
            algo=algo,
            virtual_nodes=vnodes,
            node_counts=[p.nodes for p in points],
            mean_wall_us=[p.mean_wall_us for p in points],
            mean_ops=[p.mean_ops for p in points],
            points=points,
            shape=shape,
            r_squared_linear=r2_linear,
            r_squared_log=r2_log,
        ))
    return reports


def run_shard_sim(
    algo: Algorithm,
    nodes: int,
    keys: int,
    virtual_nodes: Optional[int] = None,
    seed: Optional[int] = None,
    trials: int = 1,
) -> UniformityReport:
    """
    Write ``keys`` one-byte values into ``nodes`` in-process stores and measure the spread.

    Trial ``t`` names its keys ``key:<seed + t>:<i>`` and starts from empty stores.
    """
    algo = Algorithm(algo)
    seed = config.PLACEMENT_SEED if seed is None else seed
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    placer = make_placer(algo, uniform_map(nodes), virtual_nodes)

    started = time.perf_counter()
    per_trial = []
    for trial in range(trials):
        names = [f"key:{seed + trial}:{i}" for i in range(keys)]
        datum_ids = np.fromiter((key_to_id(name) for name in names), dtype=np.uint64, count=keys)
        owners = placer.locate_many(datum_ids)
        stores: Dict[int, Dict[str, bytes]] = {node: {} for node in placer.node_ids}
        for name, owner in zip(names, owners.tolist()):
            stores[owner][name] = b"\x00"
        counts = [len(stores[node]) for node in placer.node_ids]
        per_trial.append(max_variability(counts, [keys / nodes] * nodes))
    elapsed = time.perf_counter() - started

    logger.info("shardsim: {} nodes={} keys={} trials={} max variability={:.3f}%", algo.value, nodes, keys,
                trials, max(per_trial))
    return _summarize(algo, placer, nodes, max(1, keys // nodes), per_trial, elapsed)
