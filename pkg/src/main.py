"""
ASURA Placement Toolkit - Command Line Interface

Lookups against map files plus the placement experiments. Experiment CSV goes
to ``--out`` or stdout; summary tables go to stderr.
"""

import sys
from typing import List, Optional, Sequence

import click
import pandas as pd
from rich.console import Console

from src.harness import (
    check_churn,
    churn_frame,
    draw_frame,
    parse_events,
    run_churn,
    run_draw_count,
    run_scaling,
    run_shard_sim,
    run_uniformity,
    scaling_frame,
    shard_frame,
    uniform_map,
    uniformity_frame,
    write_csv,
)
from src.harness import reporting
from src.models import Algorithm, NodeSpec
from src.placement import ClusterMap, asura_lookup_k, key_to_id, load_map, memory_account, save_map
from src.utils import config, setup_logging
from src.utils.errors import InvariantViolationError, PlacementError

console = Console(stderr=True)

ALGORITHMS = [a.value for a in Algorithm]


def _int_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def common_options(trials: int = 1, algos: Sequence[str] = ALGORITHMS):
    """
    Options every experiment command accepts: --algo, --data-per-node,
    --trials, --vnodes, --seed and --out. ``--nodes`` is declared per command.
    """
    choices = list(algos)
    options = [
        click.option("--algo", "algos", type=click.Choice(choices), multiple=True, default=tuple(choices),
                     show_default=True, help="Algorithm; repeat for several."),
        click.option("--data-per-node", type=click.IntRange(min=1), default=1000, show_default=True,
                     help="Synthetic data per node; sizes the corpus when no explicit count is given."),
        click.option("--trials", type=click.IntRange(min=1), default=trials, show_default=True,
                     help="Repetitions; trial t reruns with a seed derived from --seed and t."),
        click.option("--vnodes", type=click.IntRange(min=1), default=None,
                     help="Virtual nodes per ring node (default: PLACEMENT_VNODES)."),
        click.option("--seed", type=int, default=None, help="Experiment seed (default: PLACEMENT_SEED)."),
        click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="CSV output file (default: stdout)."),
    ]

    def decorate(func):
        for option in reversed(options):
            func = option(func)
        return func

    return decorate


def _emit(ctx: click.Context, frame: pd.DataFrame, out: Optional[str]) -> None:
    if out:
        write_csv(frame, out)
        if not ctx.obj["quiet"]:
            console.print(f"💾 CSV written to: [cyan]{out}[/cyan]")
    else:
        click.echo(write_csv(frame), nl=False)


@click.group()
@click.option("--log-level", default=None, help="Log level (default: LOG_LEVEL).")
@click.option("--quiet", "-q", is_flag=True, help="Do not print summary tables.")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], quiet: bool):
    """ASURA placement toolkit: lookups and placement experiments."""
    setup_logging(log_level or config.LOG_LEVEL)
    if not config.validate():
        raise click.UsageError("configuration is invalid, check the environment")
    ctx.ensure_object(dict)
    ctx.obj["quiet"] = quiet


@cli.command()
@click.option("--map", "map_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Cluster map file.")
@click.option("--id", "datum_id", type=click.IntRange(min=0, max=2**64 - 1), default=None, help="Datum id.")
@click.option("--key", default=None, help="String key, hashed to a datum id.")
@click.option("--k", "k", type=click.IntRange(min=1), default=1, show_default=True, help="Replicas.")
def lookup(map_path: str, datum_id: Optional[int], key: Optional[str], k: int):
    """Print one 'segment node' line per replica of a datum."""
    if (datum_id is None) == (key is None):
        raise click.UsageError("give exactly one of --id and --key")
    if key is not None:
        datum_id = key_to_id(key)
    placement = asura_lookup_k(datum_id, load_map(map_path), k)
    for selection in placement.selections:
        click.echo(f"{selection.segment} {selection.node}")


@cli.command()
@click.option("--capacity", "capacities", type=click.FloatRange(min=0.0, min_open=True), multiple=True,
              required=True, help="Node capacity; repeat per node.")
@click.option("--ids", callback=_int_list, default=None, help="Comma-separated node ids (default: 0..N-1).")
@click.option("--unit", type=click.FloatRange(min=0.0, min_open=True), default=None,
              help="Capacity unit (default: PLACEMENT_CAPACITY_UNIT).")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Map file to write.")
@click.pass_context
def mkmap(ctx: click.Context, capacities, ids: Optional[List[int]], unit: Optional[float], out: str):
    """Build a cluster map by adding nodes in order and write it to a file."""
    ids = ids if ids is not None else list(range(len(capacities)))
    if len(ids) != len(capacities):
        raise click.UsageError(f"{len(ids)} ids for {len(capacities)} capacities")
    cluster_map = ClusterMap.from_specs(
        (NodeSpec(id=node, capacity=c) for node, c in zip(ids, capacities)), unit=unit
    )
    save_map(cluster_map, out)
    if not ctx.obj["quiet"]:
        console.print(f"💾 {cluster_map.node_count} nodes, {len(cluster_map.segments)} segments "
                      f"written to: [cyan]{out}[/cyan]")


@cli.command()
@click.option("--nodes", "node_counts", type=click.IntRange(min=1), multiple=True, default=(100, 1000, 10000),
              show_default=True, help="Node count; repeat for several.")
@click.option("--vnodes", type=click.IntRange(min=1), default=None,
              help="Virtual nodes per ring node (default: PLACEMENT_VNODES).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV output file (default: stdout).")
@click.pass_context
def memory(ctx: click.Context, node_counts, vnodes: Optional[int], out: Optional[str]):
    """Bytes of placement state per algorithm.

    Columns: algo, nodes, virtual_nodes, bytes.
    """
    vnodes = config.PLACEMENT_VNODES if vnodes is None else vnodes
    rows = []
    for count in node_counts:
        cluster_map = uniform_map(count)
        for algo in Algorithm:
            rows.append({
                "algo": algo.value,
                "nodes": count,
                "virtual_nodes": vnodes if algo == Algorithm.RING else 0,
                "bytes": memory_account(cluster_map, algo, vnodes),
            })
    _emit(ctx, pd.DataFrame(rows, columns=["algo", "nodes", "virtual_nodes", "bytes"]), out)


@cli.command()
@click.option("--nodes", type=click.IntRange(min=1), default=100, show_default=True)
@common_options(trials=20)
@click.pass_context
def uniformity(ctx, nodes, algos, data_per_node, trials, vnodes, seed, out):
    """Max variability of data counts per node over repeated trials.

    Columns: algo, nodes, virtual_nodes, data_per_node, trial, max_variability_percent.
    """
    reports = [run_uniformity(a, nodes, vnodes, data_per_node, trials, seed) for a in algos]
    if not ctx.obj["quiet"]:
        reporting.render_uniformity(console, reports)
    _emit(ctx, uniformity_frame(reports), out)


@cli.command()
@click.option("--nodes", type=click.IntRange(min=1), default=100, show_default=True, help="Initial node count.")
@click.option("--events", default="add:1.0,remove:0", show_default=True,
              help="Comma-separated add:<capacity>[@<id>] and remove:<id> events.")
@click.option("--ids", "ids_count", type=click.IntRange(min=1), default=None,
              help="Synthetic data ids to place (default: nodes x data-per-node).")
@common_options()
@click.pass_context
def churn(ctx, nodes, events, ids_count, algos, data_per_node, trials, vnodes, seed, out):
    """Data moved by each membership change.

    Columns: algo, trial, event, node_id, moved_count, total_count, moved_fraction,
    expected_fraction, misdirected_count, flagged_count, metadata_false_negatives.
    Exits with status 2 if a move violates optimal movement.
    """
    try:
        parsed = parse_events(events)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--events")
    ids_count = ids_count or nodes * data_per_node
    reports = []
    for algo in algos:
        reports.extend(run_churn(algo, nodes, parsed, ids_count, seed, vnodes, trials=trials))
    if not ctx.obj["quiet"]:
        reporting.render_churn(console, reports)
    _emit(ctx, churn_frame(reports), out)
    check_churn(reports)


@cli.command()
@click.option("--nodes", "node_counts", type=click.IntRange(min=1), multiple=True, default=(100,),
              show_default=True, help="Node count; repeat for several.")
@click.option("--hole-fraction", "hole_fractions", type=click.FloatRange(0.0, 0.9), multiple=True,
              default=(0.0,), show_default=True, help="Fraction of nodes removed; repeat for several.")
@click.option("--ids", "ids_count", type=click.IntRange(min=1), default=None,
              help="Lookups per point (default: nodes x data-per-node).")
@common_options(algos=[Algorithm.ASURA.value])
@click.pass_context
def draws(ctx, node_counts, hole_fractions, ids_count, algos, data_per_node, trials, vnodes, seed, out):
    """Measured against predicted raw draws per ASURA lookup.

    Only ASURA draws numbers, so --algo accepts asura alone and --vnodes is unused.
    Columns: node_count, n, h, trial, ids_count, measured_mean_draws, predicted, relative_error.
    """
    reports = [
        run_draw_count(count, fraction, ids_count or count * data_per_node, seed, trial=trial)
        for count in node_counts
        for fraction in hole_fractions
        for trial in range(trials)
    ]
    if not ctx.obj["quiet"]:
        reporting.render_draws(console, reports)
    _emit(ctx, draw_frame(reports), out)


@cli.command()
@click.option("--nodes", "--node-counts", "node_counts", callback=_int_list, default="100,200,400,800,1600",
              show_default=True, help="Comma-separated ascending node counts.")
@click.option("--lookups", type=click.IntRange(min=1), default=None,
              help="Lookups per point (default: data-per-node).")
@common_options()
@click.pass_context
def scaling(ctx, node_counts, lookups, algos, data_per_node, trials, vnodes, seed, out):
    """Lookup cost as the cluster grows; wall time is averaged over --trials passes.

    Columns: algo, virtual_nodes, nodes, mean_ops, max_ops, mean_wall_us, shape.
    """
    if not node_counts or min(node_counts) < 1:
        raise click.BadParameter("node counts must be positive", param_hint="--nodes")
    reports = run_scaling(algos, node_counts, lookups or data_per_node, vnodes, seed, trials=trials)
    if not ctx.obj["quiet"]:
        reporting.render_scaling(console, reports)
    _emit(ctx, scaling_frame(reports), out)


@cli.command()
@click.option("--nodes", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--keys", type=click.IntRange(min=1), default=None,
              help="String keys per trial (default: nodes x data-per-node).")
@common_options()
@click.pass_context
def shardsim(ctx, nodes, keys, algos, data_per_node, trials, vnodes, seed, out):
    """Write string keys into in-process stores and measure the spread.

    Columns: algo, nodes, virtual_nodes, keys, trials, max_variability_percent.
    """
    keys = keys or nodes * data_per_node
    reports = [run_shard_sim(a, nodes, keys, vnodes, seed, trials=trials) for a in algos]
    if not ctx.obj["quiet"]:
        reporting.render_uniformity(console, reports)
    _emit(ctx, shard_frame(reports, keys), out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures to exit codes: 1 usage or input, 2 invariant violation."""
    try:
        code = cli.main(args=list(argv) if argv is not None else None, prog_name="asura", standalone_mode=False)
    except InvariantViolationError as exc:
        console.print(f"❌ [red]{exc}[/red]")
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except (PlacementError, ValueError, OSError) as exc:
        console.print(f"❌ [red]{exc}[/red]")
        return 1
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
