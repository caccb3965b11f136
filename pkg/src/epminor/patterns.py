"""Pattern graphs H: named presets such as ``K1``, ``2K2``, ``P3+K1`` or ``2G3``."""

from __future__ import annotations

import json
import re

from .graph_core import Graph, GraphError, disjoint_union, grid_graph

_TERM = re.compile(r"^(\d*)([KPCG])(\d+)$")


def complete(n: int) -> Graph:
    return Graph.from_edges(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n: int) -> Graph:
    return Graph.from_edges(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)])


def _base(kind: str, n: int) -> Graph:
    if n < 1:
        raise GraphError(f"bad pattern size {kind}{n}")
    if kind == "K":
        return complete(n)
    if kind == "P":
        return path(n)
    if kind == "C":
        return cycle(n)
    g = grid_graph(n, n)
    return Graph(g.vertices, g.edges)


def parse_pattern(spec: str) -> Graph:
    """Parse a preset name or an inline JSON ``{"n":..,"edges":..}`` object."""
    spec = spec.strip()
    if spec.startswith("{"):
        data = json.loads(spec)
        return Graph.from_edges(range(data["n"]), data.get("edges", []))
    parts = []
    for term in spec.replace(" ", "").split("+"):
        m = _TERM.match(term)
        if not m:
            raise GraphError(f"cannot parse pattern term {term!r}")
        mult = int(m.group(1)) if m.group(1) else 1
        parts.extend([_base(m.group(2), int(m.group(3)))] * mult)
    return disjoint_union(parts).graph


def components_of(h: Graph) -> list[Graph]:
    """Connected components of ``h`` relabelled to 0..n-1, in order of minimum vertex."""
    out = []
    for comp in h.components():
        order = sorted(comp)
        idx = {v: i for i, v in enumerate(order)}
        out.append(Graph.from_edges(range(len(order)), [(idx[u], idx[v]) for u, v in h.induced(comp).edges]))
    return out


def component_vertex_sets(h: Graph) -> list[frozenset[int]]:
    return h.components()


def grid_host_order(h: Graph) -> int:
    """Smallest g such that ``h`` is a minor of the g x g grid."""
    from .minor_model import is_minor

    g = 1
    while not is_minor(h, grid_graph(g, g)):
        g += 1
        if g > 14 * max(h.n, 1):
            raise GraphError("pattern does not fit any desk-scale grid (is it planar?)")
    return g
