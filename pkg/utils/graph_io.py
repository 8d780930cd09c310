"""
Edge-list text format (see docs/edge_list_format.md):

    # comments and blank lines are ignored
    n m [sides]
    v X|Y        exactly n lines, only when the header ends with "sides"
    u v          exactly m lines
"""
from pathlib import Path
from typing import Union

from app.core.exceptions import GraphError, GraphFormatError
from schemas.graph import Graph
from services.graph_core import build_graph


def _int_token(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {token!r}", line_no) from None


def parse_edge_list(text: str) -> Graph:
    lines = [
        (no, raw.split("#", 1)[0].split())
        for no, raw in enumerate(text.splitlines(), start=1)
    ]
    lines = [(no, tokens) for no, tokens in lines if tokens]
    if not lines:
        raise GraphFormatError("missing header line 'n m'")

    header_no, header = lines[0]
    if len(header) not in (2, 3) or (len(header) == 3 and header[2] != "sides"):
        raise GraphFormatError("header must be 'n m' or 'n m sides'", header_no)
    n = _int_token(header[0], header_no, "n")
    m = _int_token(header[1], header_no, "m")
    if n < 0 or m < 0:
        raise GraphFormatError("n and m must be non-negative", header_no)
    has_sides = len(header) == 3

    body = lines[1:]
    side = None
    if has_sides:
        if len(body) < n:
            raise GraphFormatError(f"expected {n} side lines, found {len(body)}")
        side = [None] * n
        for no, tokens in body[:n]:
            if len(tokens) != 2 or tokens[1] not in ("X", "Y"):
                raise GraphFormatError("side line must be 'v X' or 'v Y'", no)
            v = _int_token(tokens[0], no, "vertex")
            if not 0 <= v < n:
                raise GraphFormatError(f"vertex {v} out of range", no)
            if side[v] is not None:
                raise GraphFormatError(f"vertex {v} labelled twice", no)
            side[v] = tokens[1]
        body = body[n:]

    if len(body) != m:
        last = body[-1][0] if body else header_no
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", last)

    edges = []
    for no, tokens in body:
        if len(tokens) != 2:
            raise GraphFormatError("edge line must be 'u v'", no)
        u = _int_token(tokens[0], no, "u")
        v = _int_token(tokens[1], no, "v")
        edges.append((u, v, no))

    # Re-raise structural problems with the line that caused them
    seen = set()
    for u, v, no in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}", no)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", no)
        if side is not None and side[u] == side[v]:
            raise GraphFormatError(f"edge ({u}, {v}) joins two {side[u]} vertices", no)
        seen.add(key)

    try:
        return build_graph(n, [(u, v) for u, v, _ in edges], side=side)
    except GraphError as e:
        raise GraphFormatError(e.message) from e


def format_edge_list(g: Graph) -> str:
    out = [f"{g.n} {g.edge_count} sides" if g.side is not None else f"{g.n} {g.edge_count}"]
    if g.side is not None:
        out.extend(f"{v} {s}" for v, s in enumerate(g.side))
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def read_edge_list(path: Union[str, Path]) -> Graph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e}") from e
    return parse_edge_list(text)


def write_edge_list(g: Graph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edge_list(g), encoding="utf-8")
    return path
