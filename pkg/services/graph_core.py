"""
Graph construction, validation, traversal and the short-cycle census.
"""
import logging
import math
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import networkx as nx

from app.core.exceptions import GraphError, PreconditionError
from schemas.graph import CycleCensus, Graph, Side

logger = logging.getLogger(__name__)


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    side: Optional[Sequence[Side]] = None,
) -> Graph:
    """
    Build a validated Graph from an edge list.

    Raises:
        GraphError: out-of-range vertex, loop, duplicate edge (either
            orientation) or an edge inside one side of the bipartition.
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    if side is not None:
        side = tuple(side)
        if len(side) != n:
            raise GraphError(f"{len(side)} side labels for {n} vertices")
        bad = [s for s in side if s not in ("X", "Y")]
        if bad:
            raise GraphError(f"side labels must be X or Y, got {bad[0]!r}")

    neighbours: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        if v in neighbours[u]:
            raise GraphError(f"duplicate edge ({u}, {v})")
        if side is not None and side[u] == side[v]:
            raise GraphError(f"edge ({u}, {v}) joins two {side[u]} vertices")
        neighbours[u].add(v)
        neighbours[v].add(u)

    adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbours)
    return Graph(n=n, adjacency=adjacency, side=side)


def validate_biregular(g: Graph, d: int) -> bool:
    """True iff every X vertex has degree d and every Y vertex degree d+2."""
    if g.side is None:
        raise GraphError("biregularity needs side labels")
    for v in range(g.n):
        want = d if g.side[v] == "X" else d + 2
        if g.degree(v) != want:
            return False
    return True


def average_degree(g: Graph) -> Fraction:
    if g.n == 0:
        raise PreconditionError("average degree of the empty graph is undefined")
    return Fraction(2 * g.edge_count, g.n)


@lru_cache(maxsize=32)
def to_networkx(g: Graph) -> nx.Graph:
    """Frozen networkx view of g; X/Y labels go to the 'side' node attribute."""
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges())
    if g.side is not None:
        nx.set_node_attributes(G, dict(enumerate(g.side)), "side")
    return nx.freeze(G)


def from_networkx(G: nx.Graph) -> Graph:
    """
    Convert a networkx graph on nodes 0..n-1 into a validated Graph.

    Side labels are taken from the 'side' node attribute when every node has one.
    """
    nodes = sorted(G.nodes)
    if nodes != list(range(len(nodes))):
        raise GraphError("networkx nodes must be labelled 0..n-1")
    labels = [G.nodes[v].get("side") for v in nodes]
    side = labels if nodes and all(s is not None for s in labels) else None
    return build_graph(len(nodes), G.edges, side=side)


def ball(g: Graph, v: int, radius: int) -> tuple[int, ...]:
    return tuple(sorted(nx.single_source_shortest_path_length(to_networkx(g), v, cutoff=radius)))


def is_tree_ball(g: Graph, v: int, radius: int) -> bool:
    """True iff the subgraph induced on the radius-ball around v is a tree."""
    G = to_networkx(g)
    return nx.is_tree(G.subgraph(ball(g, v, radius)))


def shortest_cycle_through(g: Graph, v: int, L: int) -> Optional[int]:
    """
    Length of the shortest cycle through v if it is at most L, else None.

    BFS from v to depth L//2, labelling every vertex by the neighbour of v
    its tree path starts with. An edge x-y between different labels closes a
    cycle of length dist(x)+dist(y)+1 through v, and the shortest cycle
    through v always contains such an edge.
    """
    depth = L // 2
    dist = {v: 0}
    branch = {v: -1}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if dist[x] >= depth:
            continue
        for y in g.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                branch[y] = y if x == v else branch[x]
                queue.append(y)

    best: Optional[int] = None
    for x, dx in dist.items():
        if x == v:
            continue
        for y in g.adjacency[x]:
            if y == v or y not in dist or y < x:
                continue
            if branch[x] != branch[y]:
                length = dx + dist[y] + 1
                if length <= L and (best is None or length < best):
                    best = length
    return best


def short_cycle_census(g: Graph, L: int) -> CycleCensus:
    """Flag every vertex lying on a cycle of length at most L."""
    if L < 3:
        raise PreconditionError(f"cycle cutoff L must be at least 3, got {L}")
    flags = tuple(shortest_cycle_through(g, v, L) is not None for v in range(g.n))
    census = CycleCensus(L=L, on_short_cycle=flags, count=sum(flags))
    logger.debug("short-cycle census L=%d: %d of %d vertices", L, census.count, g.n)
    return census


def short_cycle_cutoff(d: int, total_vertices: int) -> int:
    """floor(log_{d^2-1} log N): the largest L with (d^2-1)^L <= log N."""
    if d < 2:
        raise PreconditionError(f"d must be at least 2, got {d}")
    if total_vertices < 3:
        raise PreconditionError(f"log log N needs N >= 3, got {total_vertices}")
    log_n = math.log(total_vertices)
    base = d * d - 1
    L = 0
    while base ** (L + 1) <= log_n:
        L += 1
    return L


def balanced_tree_size(d: int, i: int) -> int:
    """
    Vertex count of the balanced (d, d+2)-biregular tree of depth i rooted at
    an X vertex: 1 + d * sum_{j<i} (d-1)^floor(j/2) * (d+1)^ceil(j/2).
    """
    if d < 3:
        raise PreconditionError(f"d must be at least 3, got {d}")
    if i < 0:
        raise PreconditionError(f"levels must be non-negative, got {i}")
    return 1 + d * sum((d - 1) ** (j // 2) * (d + 1) ** ((j + 1) // 2) for j in range(i))
