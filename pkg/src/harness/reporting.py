"""
CSV and console rendering of experiment reports.

CSV goes through pandas with fixed float formatting so reruns with the same
seed produce identical bytes; console tables go through rich.
"""

from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Union

import pandas as pd
from rich.console import Console
from rich.table import Table

from ..models import ChurnReport, DrawReport, ScalingReport, UniformityReport

FLOAT_FORMAT = "%.6f"

UNIFORMITY_COLUMNS = ["algo", "nodes", "virtual_nodes", "data_per_node", "trial", "max_variability_percent"]
CHURN_COLUMNS = [
    "algo", "trial", "event", "node_id", "moved_count", "total_count", "moved_fraction", "expected_fraction",
    "misdirected_count", "flagged_count", "metadata_false_negatives",
]
DRAW_COLUMNS = ["node_count", "n", "h", "trial", "ids_count", "measured_mean_draws", "predicted", "relative_error"]
SCALING_COLUMNS = ["algo", "virtual_nodes", "nodes", "mean_ops", "max_ops", "mean_wall_us", "shape"]
SHARD_COLUMNS = ["algo", "nodes", "virtual_nodes", "keys", "trials", "max_variability_percent"]


def uniformity_frame(reports: Iterable[UniformityReport]) -> pd.DataFrame:
    """One row per trial."""
    rows = [
        {
            "algo": r.algo.value,
            "nodes": r.nodes,
            "virtual_nodes": r.virtual_nodes,
            "data_per_node": r.data_per_node,
            "trial": trial,
            "max_variability_percent": value,
        }
        for r in reports
        for trial, value in enumerate(r.per_trial_percent)
    ]
    return pd.DataFrame(rows, columns=UNIFORMITY_COLUMNS)


def churn_frame(reports: Iterable[ChurnReport]) -> pd.DataFrame:
    rows = [dict(r.model_dump(mode="json")) for r in reports]
    frame = pd.DataFrame(rows, columns=CHURN_COLUMNS)
    for column in ("flagged_count", "metadata_false_negatives"):
        frame[column] = frame[column].astype("Int64")
    return frame


def draw_frame(reports: Iterable[DrawReport]) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in reports], columns=DRAW_COLUMNS)


def scaling_frame(reports: Iterable[ScalingReport]) -> pd.DataFrame:
    """One row per (algorithm, cluster size)."""
    rows = [
        {
            "algo": r.algo.value,
            "virtual_nodes": r.virtual_nodes,
            "nodes": p.nodes,
            "mean_ops": p.mean_ops,
            "max_ops": p.max_ops,
            "mean_wall_us": p.mean_wall_us,
            "shape": r.shape,
        }
        for r in reports
        for p in r.points
    ]
    return pd.DataFrame(rows, columns=SCALING_COLUMNS)


def shard_frame(reports: Iterable[UniformityReport], keys: int) -> pd.DataFrame:
    rows = [
        {
            "algo": r.algo.value,
            "nodes": r.nodes,
            "virtual_nodes": r.virtual_nodes,
            "keys": keys,
            "trials": r.trials,
            "max_variability_percent": r.max_variability_percent,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=SHARD_COLUMNS)


def write_csv(frame: pd.DataFrame, out: Optional[Union[str, Path, TextIO]] = None) -> Optional[str]:
    """Write ``frame`` to ``out`` (path or stream); return the text when ``out`` is None."""
    if isinstance(out, (str, Path)):
        frame.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return None
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if out is not None:
        out.write(text)
    return text


def render_uniformity(console: Console, reports: List[UniformityReport]) -> None:
    table = Table(title="Max variability", show_header=True, header_style="bold magenta")
    table.add_column("Algorithm", style="cyan")
    table.add_column("Nodes", justify="right")
    table.add_column("VNodes", justify="right")
    table.add_column("Data/node", justify="right")
    table.add_column("Median %", justify="right", style="green")
    table.add_column("Max %", justify="right")
    table.add_column("Extra nodes %", justify="right")
    table.add_column("Seconds", justify="right")
    for r in reports:
        table.add_row(
            r.algo.value, str(r.nodes), str(r.virtual_nodes), str(r.data_per_node),
            f"{r.median_percent:.3f}", f"{r.max_variability_percent:.3f}",
            f"{r.extra_node_percent:.2f}", f"{r.elapsed_seconds:.2f}",
        )
    console.print(table)


def render_churn(console: Console, reports: List[ChurnReport]) -> None:
    table = Table(title="Data movement", show_header=True, header_style="bold magenta")
    table.add_column("Algorithm", style="cyan")
    table.add_column("Event")
    table.add_column("Node", justify="right")
    table.add_column("Moved", justify="right")
    table.add_column("Moved %", justify="right", style="green")
    table.add_column("Expected %", justify="right")
    table.add_column("Misdirected", justify="right")
    table.add_column("Flagged", justify="right")
    for r in reports:
        misdirected = f"[red]{r.misdirected_count}[/red]" if r.misdirected_count else "0"
        table.add_row(
            r.algo.value, r.event.value, str(r.node_id), str(r.moved_count),
            f"{r.moved_fraction * 100:.3f}", f"{r.expected_fraction * 100:.3f}", misdirected,
            "-" if r.flagged_count is None else str(r.flagged_count),
        )
    console.print(table)


def render_draws(console: Console, reports: List[DrawReport]) -> None:
    table = Table(title="Draws per lookup", show_header=True, header_style="bold magenta")
    for column in ("Nodes", "n", "h", "Measured", "Predicted", "Error %"):
        table.add_column(column, justify="right")
    for r in reports:
        table.add_row(
            str(r.node_count), f"{r.n:g}", f"{r.h:g}", f"{r.measured_mean_draws:.4f}",
            f"{r.predicted:.4f}", f"{r.relative_error * 100:.2f}",
        )
    console.print(table)


def render_scaling(console: Console, reports: List[ScalingReport]) -> None:
    table = Table(title="Lookup cost", show_header=True, header_style="bold magenta")
    table.add_column("Algorithm", style="cyan")
    table.add_column("Nodes", justify="right")
    table.add_column("Mean ops", justify="right", style="green")
    table.add_column("Wall µs", justify="right")
    table.add_column("Shape")
    for r in reports:
        for p in r.points:
            table.add_row(r.algo.value, str(p.nodes), f"{p.mean_ops:.3f}", f"{p.mean_wall_us:.2f}", r.shape)
    console.print(table)
