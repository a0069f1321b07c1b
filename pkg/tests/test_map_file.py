"""
Tests for the cluster map text format
"""

import pytest

from src.models import NodeSpec
from src.placement import ClusterMap, load_map, parse_map, save_map, serialize_map
from src.utils.errors import MapFormatError

CANONICAL = """asura-map v1 unit=1.0
node 0 1.5
node 7 0.3
seg 0 1.0 0
seg 1 0.5 0
seg 2 0.3 7
"""


def test_serialize_is_canonical():
    cluster_map = ClusterMap.from_specs([NodeSpec(id=0, capacity=1.5), NodeSpec(id=7, capacity=0.3)], unit=1.0)
    assert serialize_map(cluster_map) == CANONICAL


def test_parse_then_serialize_is_byte_identical():
    assert serialize_map(parse_map(CANONICAL)) == CANONICAL


def test_parse_tolerates_blank_lines_and_holes():
    text = "asura-map v1 unit=2.0\n\nnode 3 2.0\nseg 4 1.0 3\n"
    cluster_map = parse_map(text)
    assert cluster_map.unit == 2.0
    assert cluster_map.segments_of(3) == [4]
    assert cluster_map.hole_length == 4.0


def test_save_and_load(tmp_path):
    path = save_map(parse_map(CANONICAL), tmp_path / "cluster.map")
    assert path.read_text() == CANONICAL
    assert load_map(path).segments == parse_map(CANONICAL).segments


@pytest.mark.parametrize(
    "text, line_number, fragment",
    [
        ("node 0 1.0\n", 1, "missing header"),
        ("asura-map v1 unit=0\n", 1, "unit must be > 0"),
        ("asura-map v1 unit=1.0\nnode 0 1.0\nnode 0 1.0\n", 3, "listed twice"),
        ("asura-map v1 unit=1.0\nnode 0 1.0\nseg 0 1.0 0\nseg 0 1.0 0\n", 4, "listed twice"),
        ("asura-map v1 unit=1.0\nnode 0 2.0\nseg 0 2.0 0\n", 3, "outside (0, 1]"),
        ("asura-map v1 unit=1.0\nnode 0 1.0\nseg 0 1.0 5\n", 3, "undeclared node 5"),
        ("asura-map v1 unit=1.0\nnode x 1.0\n", 2, "expected an integer"),
        ("asura-map v1 unit=1.0\nvnode 0 1.0\n", 2, "unrecognized line"),
        ("asura-map v1 unit=nan\n", 1, "finite"),
        ("asura-map v1 unit=1.0\nnode 1 nan\n", 2, "finite"),
        ("asura-map v1 unit=1.0\nnode 0 1.0\nseg 0 inf 0\n", 3, "finite"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line_number, fragment):
    with pytest.raises(MapFormatError) as excinfo:
        parse_map(text)
    assert excinfo.value.line_number == line_number
    assert str(excinfo.value).startswith(f"line {line_number}: ")
    assert fragment in str(excinfo.value)


def test_parse_rejects_broken_conservation():
    with pytest.raises(MapFormatError, match="capacity/unit"):
        parse_map("asura-map v1 unit=1.0\nnode 0 1.5\nseg 0 1.0 0\n")
