"""Graph, grid, separation and multiset primitives.

Graphs are simple and undirected with integer vertex ids. All containers are
immutable; derived structure (adjacency, components) is cached lazily.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised when a graph or related structure violates its invariants."""


def norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise GraphError(f"self-loop at {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    edges: frozenset[Edge]
    coords: Mapping[int, tuple[int, int]] | None = field(default=None, compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        for u, v in self.edges:
            if u >= v:
                raise GraphError(f"edge {(u, v)} is not normalised (u < v required)")
            if u not in vs or v not in vs:
                raise GraphError(f"edge {(u, v)} has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Iterable[Sequence[int]], coords=None) -> Graph:
        return cls(
            tuple(sorted(set(vertices))),
            frozenset(norm_edge(u, v) for u, v in edges),
            coords,
        )

    @classmethod
    def empty(cls) -> Graph:
        return cls((), frozenset())

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def adj(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (min(u, v), max(u, v)) in self.edges

    def induced(self, keep: Iterable[int]) -> Graph:
        keep = set(keep) & self.vertex_set
        coords = None if self.coords is None else {v: self.coords[v] for v in keep}
        return Graph(
            tuple(sorted(keep)),
            frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
            coords,
        )

    def remove(self, drop: Iterable[int]) -> Graph:
        drop = set(drop)
        return self.induced(v for v in self.vertices if v not in drop)

    def components(self) -> list[frozenset[int]]:
        return components_within(self.adj, self.vertex_set)

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def edges_between(self, a: Iterable[int], b: Iterable[int]) -> list[Edge]:
        b = set(b)
        out = []
        for u in sorted(set(a)):
            for v in sorted(self.adj[u]):
                if v in b:
                    out.append(norm_edge(u, v))
        return out

    # grid helpers; only meaningful for graphs built by grid_graph
    def grid_vertex(self, row: int, col: int) -> int:
        if self.coords is None:
            raise GraphError("graph carries no grid coordinates")
        try:
            return self.coord_index[(row, col)]
        except KeyError:
            raise GraphError(f"grid coordinate {(row, col)} not present") from None

    @cached_property
    def coord_index(self) -> dict[tuple[int, int], int]:
        if self.coords is None:
            raise GraphError("graph carries no grid coordinates")
        return {c: v for v, c in self.coords.items()}

    @cached_property
    def grid_shape(self) -> tuple[int, int]:
        if not self.coords:
            raise GraphError("graph carries no grid coordinates")
        return max(r for r, _ in self.coords.values()), max(c for _, c in self.coords.values())

    def row(self, i: int) -> list[int]:
        return [self.grid_vertex(i, j) for j in range(1, self.grid_shape[1] + 1)]

    def column(self, j: int) -> list[int]:
        return [self.grid_vertex(i, j) for i in range(1, self.grid_shape[0] + 1)]


def components_within(adj: Mapping[int, Iterable[int]], allowed: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of the subgraph induced by ``allowed``, ordered by minimum vertex."""
    allowed = allowed if isinstance(allowed, (set, frozenset)) else set(allowed)
    seen: set[int] = set()
    comps = []
    for s in sorted(allowed):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def is_connected_within(adj: Mapping[int, Iterable[int]], part: Iterable[int]) -> bool:
    part = set(part)
    if not part:
        return False
    start = next(iter(part))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in part and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(part)


def shortest_path_within(adj, allowed, sources, targets) -> list[int] | None:
    """BFS path from any source to any target using only ``allowed`` vertices."""
    allowed = set(allowed)
    targets = set(targets) & allowed
    parent: dict[int, int | None] = {}
    queue = deque()
    for s in sorted(set(sources) & allowed):
        parent[s] = None
        queue.append(s)
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sorted(adj[u]):
            if w in allowed and w not in parent:
                parent[w] = u
                queue.append(w)
    return None


def grid_graph(g: int, h: int, offset: int = 0) -> Graph:
    """The g x h grid; v_{i,j} gets id offset + (i-1)*h + (j-1) and coordinate (i, j)."""
    if g < 1 or h < 1:
        raise GraphError(f"grid dimensions must be positive, got {g}x{h}")
    coords = {}
    edges = set()
    for i in range(1, g + 1):
        for j in range(1, h + 1):
            v = offset + (i - 1) * h + (j - 1)
            coords[v] = (i, j)
            if j < h:
                edges.add((v, v + 1))
            if i < g:
                edges.add((v, v + h))
    return Graph(tuple(sorted(coords)), frozenset(edges), coords)


@dataclass(frozen=True)
class Union:
    graph: Graph
    # origin[v] = (index of the input graph, vertex id in that graph)
    origin: Mapping[int, tuple[int, int]]
    # relabel[i][old] = new id for the i-th input graph
    relabel: tuple[Mapping[int, int], ...]


def disjoint_union(graphs: Sequence[Graph]) -> Union:
    origin: dict[int, tuple[int, int]] = {}
    relabel = []
    edges = set()
    nxt = 0
    for idx, gr in enumerate(graphs):
        mp = {}
        for v in gr.vertices:
            mp[v] = nxt
            origin[nxt] = (idx, v)
            nxt += 1
        for u, v in gr.edges:
            edges.add(norm_edge(mp[u], mp[v]))
        relabel.append(mp)
    return Union(Graph(tuple(range(nxt)), frozenset(edges)), origin, tuple(relabel))


# --- separations -----------------------------------------------------------


@dataclass(frozen=True)
class Separation:
    a_vertices: frozenset[int]
    b_vertices: frozenset[int]
    a_edges: frozenset[Edge]
    b_edges: frozenset[Edge]

    @property
    def separator(self) -> frozenset[int]:
        return self.a_vertices & self.b_vertices

    @property
    def order(self) -> int:
        return len(self.separator)

    @property
    def a_only(self) -> frozenset[int]:
        return self.a_vertices - self.b_vertices

    @property
    def b_only(self) -> frozenset[int]:
        return self.b_vertices - self.a_vertices

    @classmethod
    def from_vertex_sides(cls, graph: Graph, a_side: Iterable[int], b_side: Iterable[int]) -> Separation:
        """Split edges: an edge goes to B iff both ends lie in B and not both in the separator."""
        a_side, b_side = frozenset(a_side), frozenset(b_side)
        sep = a_side & b_side
        a_edges, b_edges = set(), set()
        for e in graph.edges:
            u, v = e
            if u in b_side and v in b_side and not (u in sep and v in sep):
                b_edges.add(e)
            else:
                a_edges.add(e)
        return cls(a_side, b_side, frozenset(a_edges), frozenset(b_edges))

    @classmethod
    def trivial(cls, graph: Graph) -> Separation:
        """The separation (empty graph, G)."""
        return cls(frozenset(), graph.vertex_set, frozenset(), graph.edges)


def validate_separation(graph: Graph, sep: Separation) -> tuple[int | None, list[str]]:
    """Return (order, []) if ``sep`` is a separation of ``graph``, else (None, violations)."""
    problems = []
    vs = graph.vertex_set
    for name, side, edges in (("A", sep.a_vertices, sep.a_edges), ("B", sep.b_vertices, sep.b_edges)):
        if not side <= vs:
            problems.append(f"V({name}) not contained in V(G)")
        if not edges <= graph.edges:
            problems.append(f"E({name}) not contained in E(G)")
        if any(u not in side or v not in side for u, v in edges):
            problems.append(f"{name} is not a subgraph (edge endpoint missing)")
    if sep.a_vertices | sep.b_vertices != vs:
        problems.append("V(A)∪V(B)≠V(G)")
    if sep.a_edges | sep.b_edges != graph.edges:
        problems.append("E(A)∪E(B)≠E(G)")
    if sep.a_edges & sep.b_edges:
        problems.append("E(A)∩E(B)≠∅")
    if problems:
        return None, problems
    return sep.order, []


# --- multisets of vertex sets ----------------------------------------------

ZFamily = tuple[frozenset[int], ...]


def as_zfamily(z: Iterable[Iterable[int]]) -> ZFamily:
    return tuple(frozenset(x) for x in z)


def multiset_size(z: Iterable[Iterable[int]]) -> int:
    """Number of members counted with multiplicity, ignoring empty ones."""
    return sum(1 for x in z if len(x) > 0)


def restrict_multiset(z: Iterable[Iterable[int]], keep: Iterable[int]) -> ZFamily:
    keep = frozenset(keep)
    return tuple(frozenset(x) & keep for x in z)


def subtract_multiset(z: Iterable[Iterable[int]], drop: Iterable[int]) -> ZFamily:
    drop = frozenset(drop)
    return tuple(frozenset(x) - drop for x in z)


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    z: ZFamily = ()

    def __post_init__(self):
        object.__setattr__(self, "z", as_zfamily(self.z))
        vs = self.graph.vertex_set
        for i, x in enumerate(self.z):
            if not x <= vs:
                raise GraphError(f"Z-member {i} contains vertices outside the graph")

    @property
    def size(self) -> int:
        return multiset_size(self.z)

    def remove(self, drop: Iterable[int]) -> RootedGraph:
        drop = frozenset(drop)
        return RootedGraph(self.graph.remove(drop), subtract_multiset(self.z, drop))

    def induced(self, keep: Iterable[int]) -> RootedGraph:
        keep = frozenset(keep)
        return RootedGraph(self.graph.induced(keep), restrict_multiset(self.z, keep))
