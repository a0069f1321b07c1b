#!/usr/bin/env python3
"""
Walk-through of ASURA placement on small hand-made maps.
Every step prints what the library computes; nothing here is precomputed.
"""

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from src.harness import run_churn, parse_events, uniform_map
from src.models import Algorithm, NodeSpec
from src.placement import (
    ClusterMap,
    ScriptedNumbers,
    StrawSet,
    asura_lookup,
    expected_draws,
    lookup_with_metadata,
    memory_account,
    serialize_map,
)

console = Console()

A, B, C, D, E = 0xA, 0xB, 0xC, 0xD, 0xE
NAMES = {A: "A", B: "B", C: "C", D: "D", E: "E"}


def show_map(title: str, cluster_map: ClusterMap) -> None:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Segment", justify="right")
    table.add_column("Range")
    table.add_column("Node", style="cyan")
    for number, length in enumerate(cluster_map.lengths):
        owner = cluster_map.owners[number]
        span = f"[{number}, {number + length:g})" if length else "hole"
        table.add_row(str(number), span, NAMES.get(owner, "-") if owner is not None else "-")
    console.print(table)


def lookups() -> None:
    console.print("\n[bold]1. Segments and lookups[/bold]", style="yellow")
    cluster_map = ClusterMap.from_segments([(0, 1.0, A), (1, 1.0, C), (2, 0.5, A), (3, 0.7, B)], unit=1.0)
    show_map("Three nodes, A with capacity 1.5", cluster_map)
    console.print(f"n = {cluster_map.coverage_extent:g}, h = {cluster_map.hole_length:g}")

    for values in ([4.2, 1.1], [3.3, 0.6]):
        segment, node = asura_lookup(0, cluster_map, ScriptedNumbers(values))
        console.print(f"  numbers {values} → segment {segment}, node {NAMES[node]}")

    without_b = cluster_map.remove_node(B)
    segment, node = asura_lookup(0, without_b, ScriptedNumbers([3.3, 0.6]))
    console.print(f"  B removed: [3.3, 0.6] → segment {segment}, node {NAMES[node]}")

    with_d = cluster_map.add_node(NodeSpec(id=D, capacity=1.0))
    segment, node = asura_lookup(0, with_d, ScriptedNumbers([4.2, 1.1]))
    console.print(f"  D added on segment {with_d.segments_of(D)}: [4.2, 1.1] → segment {segment}, "
                  f"node {NAMES[node]}")


def replicas() -> None:
    console.print("\n[bold]2. Replicas and churn metadata[/bold]", style="yellow")
    cluster_map = ClusterMap.from_segments([(3, 0.8, C), (4, 1.0, D), (5, 0.5, E)], unit=1.0)
    show_map("Segments 0-2 unassigned", cluster_map)

    numbers = ScriptedNumbers([6.2, 3.3, 1.6, 5.1, 4.9, 8.0, 7.2])
    placement, metadata = lookup_with_metadata(0, cluster_map, 3, numbers)
    console.print(f"  replicas on {[NAMES[n] for n in placement.nodes]} via segments {placement.segments}")
    console.print(f"  addition number {metadata.addition_number}, remove numbers {metadata.remove_numbers}")

    numbers = ScriptedNumbers([3.6, 5.4, 4.9, 6.2], extensions=[[3.6, 5.4, 12.2, 4.9, 6.2]])
    _, metadata = lookup_with_metadata(0, cluster_map, 3, numbers)
    console.print(f"  no free number before the last hit: extended range gives {metadata.addition_number}")


def straws() -> None:
    console.print("\n[bold]3. Straw Buckets[/bold]", style="yellow")
    table = {0: (1, 5, 123, 23), 1: (121, 127, 112, 111)}
    nodes = [A, B, C, D]
    straw_set = StrawSet(nodes, hasher=lambda datum, node: table[datum][nodes.index(node)])
    for datum in table:
        winners = [NAMES[n] for n in straw_set.lookup_k(datum, 2)]
        console.print(f"  straws {table[datum]} → primary {winners[0]}, second {winners[1]}")


def costs() -> None:
    console.print("\n[bold]4. Draws and memory[/bold]", style="yellow")
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("n", justify="right")
    table.add_column("h", justify="right")
    table.add_column("Expected draws", justify="right", style="green")
    for n, h in ((16, 0), (10, 0), (24, 0), (100, 50)):
        table.add_row(str(n), str(h), f"{expected_draws(n, h):.3f}")
    console.print(table)

    cluster_map = uniform_map(10_000)
    for algo in Algorithm:
        console.print(f"  {algo.value:>5}: {memory_account(cluster_map, algo, 100):>10,} bytes for 10,000 nodes")


def churn() -> None:
    console.print("\n[bold]5. Churn over 20,000 synthetic ids[/bold]", style="yellow")
    for report in run_churn(Algorithm.ASURA, 10, parse_events("add:1.0,remove:3"), 20_000, seed=0):
        console.print(
            f"  {report.event.value:<6} node {report.node_id}: moved {report.moved_fraction:.2%} "
            f"(expected {report.expected_fraction:.2%}), flagged {report.flagged_count}, "
            f"misdirected {report.misdirected_count}"
        )


def main():
    console.print(Panel.fit(
        "[bold cyan]ASURA placement[/bold cyan]\nSegments, cascaded numbers and optimal movement",
        border_style="cyan",
    ))
    lookups()
    replicas()
    straws()
    costs()
    churn()
    console.print("\nMap file for the first example:\n")
    console.print(serialize_map(ClusterMap.from_segments([(0, 1.0, A), (1, 1.0, C), (2, 0.5, A), (3, 0.7, B)],
                                                         unit=1.0)), markup=False)


if __name__ == "__main__":
    main()
