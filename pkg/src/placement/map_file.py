"""
Line-oriented text format for cluster maps.

    asura-map v1 unit=1.0
    node 7 1.5
    seg 0 1.0 7
    seg 1 0.5 7

Nodes are written in ascending id order and segments in ascending number
order; reals use ``repr`` so canonical files round-trip byte for byte.
"""

import math
from pathlib import Path
from typing import Dict, List, Union

from ..models import Segment
from ..utils.errors import MapFormatError
from .cluster_map import CONSERVATION_TOLERANCE, ClusterMap

HEADER_PREFIX = "asura-map v1 unit="


def serialize_map(cluster_map: ClusterMap) -> str:
    lines = [f"{HEADER_PREFIX}{cluster_map.unit!r}"]
    for node in sorted(cluster_map.nodes):
        lines.append(f"node {node} {cluster_map.nodes[node]!r}")
    for number in sorted(cluster_map.segments):
        segment = cluster_map.segments[number]
        lines.append(f"seg {number} {segment.length!r} {segment.owner}")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, line_number: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise MapFormatError(f"expected an integer, got {token!r}", line_number) from None
    if value < 0:
        raise MapFormatError(f"expected a non-negative integer, got {token!r}", line_number)
    return value


def _parse_real(token: str, line_number: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MapFormatError(f"expected a real number, got {token!r}", line_number) from None
    if not math.isfinite(value):
        raise MapFormatError(f"expected a finite real number, got {token!r}", line_number)
    return value


def parse_map(text: str) -> ClusterMap:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise MapFormatError(f"missing header '{HEADER_PREFIX}<real>'", 1)
    unit = _parse_real(lines[0][len(HEADER_PREFIX):], 1)
    if unit <= 0:
        raise MapFormatError(f"unit must be > 0, got {unit}", 1)

    nodes: Dict[int, float] = {}
    segments: Dict[int, Segment] = {}
    owned: Dict[int, List[float]] = {}

    for line_number, line in enumerate(lines[1:], start=2):
        fields = line.split()
        if not fields:
            continue
        kind = fields[0]
        if kind == "node" and len(fields) == 3:
            node = _parse_int(fields[1], line_number)
            capacity = _parse_real(fields[2], line_number)
            if node in nodes:
                raise MapFormatError(f"node {node} listed twice", line_number)
            if capacity <= 0:
                raise MapFormatError(f"node {node} has capacity {capacity}", line_number)
            nodes[node] = capacity
        elif kind == "seg" and len(fields) == 4:
            number = _parse_int(fields[1], line_number)
            length = _parse_real(fields[2], line_number)
            owner = _parse_int(fields[3], line_number)
            if number in segments:
                raise MapFormatError(f"segment {number} listed twice", line_number)
            if not 0.0 < length <= 1.0:
                raise MapFormatError(f"segment {number} length {length} outside (0, 1]", line_number)
            if owner not in nodes:
                raise MapFormatError(f"segment {number} owned by undeclared node {owner}", line_number)
            segments[number] = Segment(number=number, length=length, owner=owner)
            owned.setdefault(owner, []).append(length)
        else:
            raise MapFormatError(f"unrecognized line {line!r}", line_number)

    for node, capacity in nodes.items():
        total = sum(owned.get(node, []))
        expected = capacity / unit
        if abs(total - expected) > CONSERVATION_TOLERANCE * max(1.0, expected):
            raise MapFormatError(f"node {node}: segments sum to {total}, capacity/unit is {expected}")

    return ClusterMap(unit=unit, nodes=nodes, segments=segments)


def load_map(path: Union[str, Path]) -> ClusterMap:
    return parse_map(Path(path).read_text(encoding="utf-8"))


def save_map(cluster_map: ClusterMap, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(serialize_map(cluster_map), encoding="utf-8")
    return path
