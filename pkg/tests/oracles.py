"""Brute-force reference implementations, independent of the library's search code.

Only usable on very small graphs (n <= 7)."""

from __future__ import annotations

from itertools import combinations, permutations, product

import networkx as nx


def _nx(vertices, edges) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(vertices)
    g.add_edges_from(edges)
    return g


def _connected(gx: nx.Graph, part) -> bool:
    return len(part) > 0 and nx.is_connected(gx.subgraph(part))


def model_images(vertices, edges, h_vertices, h_edges):
    """Images of every H-model: map each host vertex to an H-vertex or to nothing."""
    gx = _nx(vertices, edges)
    vs = list(vertices)
    hv = list(h_vertices)
    out = []
    for labels in product([None] + hv, repeat=len(vs)):
        sets = {x: [v for v, l in zip(vs, labels) if l == x] for x in hv}
        if any(not _connected(gx, s) for s in sets.values()):
            continue
        ok = True
        for a, b in h_edges:
            sa, sb = set(sets[a]), sets[b]
            if not any(w in sa for u in sb for w in gx[u]):
                ok = False
                break
        if ok:
            out.append((frozenset(v for v, l in zip(vs, labels) if l is not None), sets))
    return out


def hzl_images(vertices, edges, z, h_vertices, h_edges, ell):
    """Images of (H, Z, l)-models: H-models meeting at least l members of Z."""
    res = set()
    for image, _ in model_images(vertices, edges, h_vertices, h_edges):
        if sum(1 for x in z if x and not set(x).isdisjoint(image)) >= ell:
            res.add(image)
    return res


def pure_images(vertices, edges, z, h_vertices, h_edges, ell):
    """Images of pure models: some components, each assigned its own members, l in total."""
    hx = _nx(h_vertices, h_edges)
    comps = [frozenset(c) for c in nx.connected_components(hx)]
    res = set()
    for r in range(1, len(comps) + 1):
        for chosen in combinations(comps, r):
            hv = [v for c in chosen for v in c]
            he = [e for e in h_edges if e[0] in hv]
            for image, sets in model_images(vertices, edges, hv, he):
                cimg = [frozenset(v for x in c for v in sets[x]) for c in chosen]
                # assign each member to a component (or none); need l members, every component used
                for assign in product([None] + list(range(r)), repeat=len(z)):
                    if sum(a is not None for a in assign) != ell:
                        continue
                    if set(a for a in assign if a is not None) != set(range(r)):
                        continue
                    if all(a is None or (z[i] and not set(z[i]).isdisjoint(cimg[a])) for i, a in enumerate(assign)):
                        res.add(image)
                        break
    return res


def minimal(images):
    images = sorted(set(images), key=len)
    out = []
    for s in images:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def packing_number(images) -> int:
    sets = minimal(images)
    best = 0

    def rec(i, used, count):
        nonlocal best
        best = max(best, count)
        for j in range(i, len(sets)):
            if used.isdisjoint(sets[j]):
                rec(j + 1, used | sets[j], count + 1)

    rec(0, frozenset(), 0)
    return best


def covering_number(vertices, images) -> int:
    sets = minimal(images)
    vs = sorted(vertices)
    for size in range(len(vs) + 1):
        for s in combinations(vs, size):
            s = set(s)
            if all(not s.isdisjoint(x) for x in sets):
                return size
    return len(vs)


def max_disjoint_paths(vertices, edges, sources, sinks) -> int:
    """Vertex-disjoint source-to-sink paths via networkx node connectivity with super terminals."""
    sources, sinks = set(sources), set(sinks)
    gx = _nx(vertices, edges)
    # split every vertex so that it carries one unit
    d = nx.DiGraph()
    for v in gx.nodes:
        d.add_edge(("in", v), ("out", v), capacity=1)
    for u, v in gx.edges:
        d.add_edge(("out", u), ("in", v), capacity=1)
        d.add_edge(("out", v), ("in", u), capacity=1)
    for s in sources:
        d.add_edge("S", ("in", s), capacity=1)
    for t in sinks:
        d.add_edge(("out", t), "T", capacity=1)
    if "S" not in d or "T" not in d:
        return 0
    return int(nx.maximum_flow_value(d, "S", "T"))


def treewidth_exact(vertices, edges) -> int:
    """Minimum over elimination orders of the largest neighbourhood at elimination."""
    vs = list(vertices)
    if not vs:
        return -1
    best = len(vs) - 1
    for order in permutations(vs):
        adj = {v: set() for v in vs}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        width = 0
        for v in order:
            nb = adj.pop(v)
            width = max(width, len(nb))
            if width >= best:
                break
            for a in nb:
                adj[a] |= nb - {a}
                adj[a].discard(v)
        best = min(best, width)
    return best
