"""Unit-capacity vertex-disjoint path routing via max-flow on a split graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

INF = 1 << 40


class FlowNetwork:
    """Directed network with integer capacities; augmenting paths by BFS."""

    def __init__(self):
        self.cap: dict[Hashable, dict[Hashable, int]] = {}

    def add_arc(self, u, v, c: int) -> None:
        self.cap.setdefault(u, {})
        self.cap.setdefault(v, {})
        self.cap[u][v] = self.cap[u].get(v, 0) + c
        self.cap[v].setdefault(u, 0)

    def max_flow(self, s, t, limit: int = INF) -> int:
        self.flow: dict[Hashable, dict[Hashable, int]] = {u: {v: 0 for v in nb} for u, nb in self.cap.items()}
        total = 0
        while total < limit:
            parent = {s: None}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for v, c in self.cap[u].items():
                    if v not in parent and c - self.flow[u][v] > 0:
                        parent[v] = u
                        queue.append(v)
            if t not in parent:
                break
            # bottleneck
            push = limit - total
            v = t
            while parent[v] is not None:
                u = parent[v]
                push = min(push, self.cap[u][v] - self.flow[u][v])
                v = u
            v = t
            while parent[v] is not None:
                u = parent[v]
                self.flow[u][v] += push
                self.flow[v][u] -= push
                v = u
            total += push
        return total

    def residual_reachable(self, s) -> set:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, c in self.cap[u].items():
                if v not in seen and c - self.flow[u][v] > 0:
                    seen.add(v)
                    queue.append(v)
        return seen


@dataclass
class RoutingResult:
    value: int
    # each path is a vertex list from a source vertex to a sink vertex
    paths: list[list]
    # vertices whose split arc is saturated and crosses the source-side min cut
    cut: set
    # vertices whose "in" copy is reachable from the source in the residual graph
    source_side: set


def route_vertex_disjoint(
    adj: Mapping[Hashable, Iterable[Hashable]],
    sources: Iterable[Hashable],
    sinks: Iterable[Hashable],
    limit: int = INF,
    capacity: Mapping[Hashable, int] | None = None,
) -> RoutingResult:
    """Vertex-disjoint paths from ``sources`` to ``sinks`` (all vertices capacity 1 by default).

    A source that is also a sink yields a single-vertex path. The min cut is the one
    closest to the sources.
    """
    src, snk = ("__s__",), ("__t__",)
    net = FlowNetwork()
    sources = list(dict.fromkeys(sources))
    sinks = set(sinks)
    for v in adj:
        net.add_arc((v, 0), (v, 1), 1 if capacity is None else capacity.get(v, 1))
        for w in adj[v]:
            net.add_arc((v, 1), (w, 0), INF)
    for v in sources:
        net.add_arc(src, (v, 0), INF)
    for v in sinks:
        net.add_arc((v, 1), snk, INF)
    net.cap.setdefault(src, {})
    net.cap.setdefault(snk, {})
    value = net.max_flow(src, snk, limit)
    reach = net.residual_reachable(src)
    source_side = {v for v in adj if (v, 0) in reach}
    cut = {v for v in adj if (v, 0) in reach and (v, 1) not in reach}
    paths = _decompose(net, src, snk, value)
    return RoutingResult(value, paths, cut, source_side)


def _decompose(net: FlowNetwork, src, snk, value: int) -> list[list]:
    flow = {u: {v: f for v, f in nb.items() if f > 0} for u, nb in net.flow.items()}
    paths = []
    for _ in range(value):
        u = src
        path = []
        visited = set()
        while u != snk:
            nxt = min((v for v, f in flow[u].items() if f > 0), key=repr)
            flow[u][nxt] -= 1
            u = nxt
            if u != snk and u[1] == 0:
                v = u[0]
                if v in visited:
                    # a flow cycle; cut it out of the path
                    idx = path.index(v)
                    del path[idx + 1:]
                    visited = set(path)
                else:
                    path.append(v)
                    visited.add(v)
        paths.append(path)
    return paths
