"""
Named graph families and random corpora used by experiments and tests.

Families come from the networkx generators and are converted once into the
bitset-backed Graph.
"""
from fractions import Fraction
from typing import Literal

import networkx as nx
import numpy as np

from app.core.exceptions import PreconditionError
from schemas.graph import Graph
from services.graph_core import build_graph, from_networkx, to_networkx


def empty_graph(n: int) -> Graph:
    return from_networkx(nx.empty_graph(n))


def path_graph(n: int) -> Graph:
    return from_networkx(nx.path_graph(n))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise PreconditionError(f"a cycle needs at least 3 vertices, got {n}")
    return from_networkx(nx.cycle_graph(n))


def complete_graph(n: int) -> Graph:
    return from_networkx(nx.complete_graph(n))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}; vertices 0..a-1 are labelled X, the rest Y."""
    G = nx.complete_bipartite_graph(a, b)
    nx.set_node_attributes(G, {v: "X" if part == 0 else "Y" for v, part in G.nodes(data="bipartite")}, "side")
    return from_networkx(G)


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return from_networkx(nx.star_graph(leaves))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """g on vertices 0..g.n-1 followed by h shifted by g.n."""
    G = nx.disjoint_union(to_networkx(g), to_networkx(h))
    if (g.side is None) != (h.side is None):
        nx.set_node_attributes(G, None, "side")
    return from_networkx(G)


def random_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    """Uniform random simple graph with exactly m edges."""
    if m > n * (n - 1) // 2:
        raise PreconditionError(f"{m} edges do not fit in a simple graph on {n} vertices")
    return from_networkx(nx.gnm_random_graph(n, m, seed=int(rng.integers(2**32))))


def max_sparse_edges(n: int, k: int, eps: Fraction) -> int:
    """Largest m with 2m/n <= tau_k - eps."""
    from services.discharging import tau

    limit = (tau(k) - eps) * n / 2
    if limit < 0:
        return -1
    return min(int(limit), n * (n - 1) // 2)


def random_sparse_graph(n: int, k: int, eps: Fraction, rng: np.random.Generator) -> Graph:
    """Random graph whose edge count is uniform over the range allowed by 2m/n <= tau_k - eps."""
    top = max_sparse_edges(n, k, eps)
    if top < 0:
        raise PreconditionError(f"eps={eps} leaves no admissible edge count for k={k}")
    m = int(rng.integers(0, top + 1))
    return random_graph(n, m, rng)


def biregular_tree(d: int, depth: int, root_side: Literal["X", "Y"] = "X") -> Graph:
    """
    Balanced (d, d+2)-biregular tree truncated at depth levels below the root.

    Internal X vertices have degree d, internal Y vertices degree d+2; leaves
    sit at the last level. With an X root the vertex count equals
    balanced_tree_size(d, depth).
    """
    if d < 2:
        raise PreconditionError(f"d must be at least 2, got {d}")
    if depth < 0:
        raise PreconditionError(f"depth must be non-negative, got {depth}")

    other = {"X": "Y", "Y": "X"}
    degree = {"X": d, "Y": d + 2}
    side = [root_side]
    edges = []
    level = [0]
    for lvl in range(depth):
        nxt = []
        for parent in level:
            s = side[parent]
            children = degree[s] if lvl == 0 else degree[s] - 1
            for _ in range(children):
                child = len(side)
                side.append(other[s])
                edges.append((parent, child))
                nxt.append(child)
        level = nxt
    return build_graph(len(side), edges, side=side)
