"""Instance streams for sweeps: small connected graphs, random graphs and random Z families."""

from __future__ import annotations

import random
from typing import Iterator

import networkx as nx

from .graph_core import Graph, RootedGraph


def _from_nx(gx: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(gx.nodes))}
    return Graph.from_edges(range(len(idx)), [(idx[u], idx[v]) for u, v in gx.edges])


def connected_graphs(max_n: int) -> Iterator[Graph]:
    """Every connected graph on 1..max_n vertices up to isomorphism (max_n <= 7, graph atlas)."""
    if max_n > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    for gx in nx.graph_atlas_g():
        if 1 <= gx.number_of_nodes() <= max_n and nx.is_connected(gx):
            yield _from_nx(gx)


def random_graph(rnd: random.Random, n: int, p: float | None = None, connected: bool = False) -> Graph:
    p = rnd.uniform(0.15, 0.6) if p is None else p
    while True:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rnd.random() < p]
        g = Graph.from_edges(range(n), edges)
        if not connected or g.is_connected():
            return g


def random_tree(rnd: random.Random, n: int) -> Graph:
    return Graph.from_edges(range(n), [(i, rnd.randrange(i)) for i in range(1, n)])


def random_zfamily(rnd: random.Random, g: Graph, max_members: int = 4, max_size: int | None = None) -> tuple[frozenset[int], ...]:
    m = rnd.randint(1, max_members)
    cap = max_size or max(1, g.n // 2)
    out = []
    for _ in range(m):
        size = rnd.randint(1, min(cap, g.n))
        out.append(frozenset(rnd.sample(list(g.vertices), size)))
    return tuple(out)


def random_rooted(rnd: random.Random, n: int, max_members: int = 4, connected: bool = False) -> RootedGraph:
    g = random_graph(rnd, n, connected=connected)
    return RootedGraph(g, random_zfamily(rnd, g, max_members))
