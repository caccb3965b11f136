"""Canonical instance JSON and DOT export."""

from __future__ import annotations

import json
from typing import Any

from .graph_core import Graph, GraphError, RootedGraph, grid_graph


def canonical_dumps(obj: Any) -> str:
    """Sorted keys, no whitespace, trailing newline; stable under load/dump."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def instance_to_json(rg: RootedGraph, grid: tuple[int, int] | None = None, provenance: dict | None = None) -> dict:
    g = rg.graph
    if list(g.vertices) != list(range(g.n)):
        raise GraphError("instance JSON needs vertices 0..n-1")
    data: dict[str, Any] = {
        "n": g.n,
        "edges": [list(e) for e in sorted(g.edges)],
        "z": [sorted(x) for x in rg.z],
    }
    if grid is not None:
        data["grid"] = list(grid)
    if provenance:
        data["provenance"] = dict(provenance)
    return data


def instance_from_json(data: dict) -> tuple[RootedGraph, dict]:
    """The rooted graph and the remaining metadata (grid shape, provenance)."""
    for key in ("n", "edges"):
        if key not in data:
            raise GraphError(f"instance lacks {key!r}")
    n = int(data["n"])
    edges = [tuple(e) for e in data["edges"]]
    meta = {k: v for k, v in data.items() if k not in ("n", "edges", "z")}
    if "grid" in data:
        rows, cols = data["grid"]
        if rows * cols != n:
            raise GraphError("grid shape does not match n")
        ref = grid_graph(rows, cols)
        if set(map(frozenset, edges)) != set(map(frozenset, ref.edges)):
            raise GraphError("edges do not form the declared grid")
        graph = ref
    else:
        graph = Graph.from_edges(range(n), edges)
    return RootedGraph(graph, tuple(frozenset(x) for x in data.get("z", []))), meta


def dumps_instance(rg: RootedGraph, grid=None, provenance=None) -> str:
    return canonical_dumps(instance_to_json(rg, grid, provenance))


def loads_instance(text: str) -> tuple[RootedGraph, dict]:
    return instance_from_json(json.loads(text))


def to_dot(rg: RootedGraph, highlight: dict[int, str] | None = None, name: str = "G") -> str:
    """Undirected DOT; Z membership goes into each node's label, grid vertices get positions."""
    g = rg.graph
    highlight = highlight or {}
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        members = [str(i) for i, x in enumerate(rg.z) if v in x]
        attrs = [f'label="{v}' + (f" Z{','.join(members)}" if members else "") + '"']
        if g.coords and v in g.coords:
            r, c = g.coords[v]
            attrs.append(f'pos="{c},{-r}!"')
        if v in highlight:
            attrs.append(f'color="{highlight[v]}"')
            attrs.append("style=filled")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in sorted(g.edges):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
