"""Edge-list reader and writer"""
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from app.core.exceptions import GraphFormatError
from services.graph_families import complete_bipartite, path_graph
from utils.graph_io import format_edge_list, parse_edge_list, read_edge_list, write_edge_list

P5_TEXT = """\
# path on five vertices
5 4
0 1
1 2

2 3
3 4   # last edge
"""


def test_parse_plain_edge_list():
    g = parse_edge_list(P5_TEXT)
    assert g.n == 5
    assert g.side is None
    assert list(g.edges()) == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_parse_with_sides():
    text = "3 2 sides\n0 X\n1 Y\n2 X\n0 1\n2 1\n"
    g = parse_edge_list(text)
    assert g.side == ("X", "Y", "X")
    assert g.adjacency[1] == (0, 2)


def test_written_file_reads_back(tmp_path):
    g = complete_bipartite(5, 3)
    path = write_edge_list(g, tmp_path / "sub" / "k53.txt")
    assert read_edge_list(path) == g
    assert format_edge_list(g).splitlines()[0] == "8 15 sides"


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("5\n", 1, "header"),
        ("3 2\n0 1\n", 2, "announces 2 edges"),
        ("3 1\n0 x\n", 2, "integer"),
        ("3 1\n0 0\n", 2, "loop"),
        ("3 2\n0 1\n1 0\n", 3, "duplicate"),
        ("3 1\n0 7\n", 2, "out of range"),
        ("2 1 sides\n0 X\n1 X\n0 1\n", 4, "joins two X"),
        ("2 1 sides\n0 X\n1 Q\n0 1\n", 3, "side line"),
    ],
)
def test_malformed_input_names_the_line(text, line, fragment):
    with pytest.raises(GraphFormatError) as info:
        parse_edge_list(text)
    assert info.value.line == line
    assert fragment in info.value.message
    assert info.value.message.startswith(f"line {line}:")


def test_empty_input():
    with pytest.raises(GraphFormatError, match="header"):
        parse_edge_list("# nothing here\n\n")


def test_missing_file(tmp_path):
    with pytest.raises(GraphFormatError, match="cannot read"):
        read_edge_list(tmp_path / "absent.txt")


def test_isolated_vertices_survive():
    g = parse_edge_list("4 1\n1 2\n")
    assert g.degrees == (0, 1, 1, 0)
    assert parse_edge_list(format_edge_list(path_graph(1))).n == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
