"""(Z, k)-partitions, their refinement into k index classes, and the
linkage-or-separation dichotomy for rooted graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .flow import FlowNetwork, route_vertex_disjoint
from .graph_core import RootedGraph, Separation, ZFamily, as_zfamily, multiset_size, subtract_multiset, validate_separation


@dataclass(frozen=True)
class ZkPartition:
    classes: tuple[tuple[int, ...], ...]
    # gamma[i] is the Z position holding classes[i]
    gamma: tuple[int, ...]
    k: int

    def to_json(self) -> dict:
        return {"classes": [list(c) for c in self.classes], "gamma": list(self.gamma), "k": self.k}

    def class_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}


def validate_zk_partition(points: Sequence[int], z: Sequence[Iterable[int]], k: int, part: ZkPartition) -> list[str]:
    z = as_zfamily(z)
    problems = []
    if len(part.classes) != len(part.gamma):
        return ["classes and gamma differ in length"]
    flat = [v for c in part.classes for v in c]
    if sorted(flat) != sorted(points) or len(set(flat)) != len(flat):
        problems.append("classes do not partition the points")
    if len(set(part.gamma)) != len(part.gamma):
        problems.append("gamma is not injective")
    for c, pos in zip(part.classes, part.gamma):
        if len(c) > k:
            problems.append(f"class {c} larger than k={k}")
        if not 0 <= pos < len(z) or not set(c) <= z[pos]:
            problems.append(f"class {c} not inside Z[{pos}]")
        if not c:
            problems.append("empty class")
    return problems


def find_zk_partition(points: Sequence[int], z: Sequence[Iterable[int]], k: int) -> ZkPartition | None:
    """Exact via a capacitated assignment: each member takes at most k points."""
    z = as_zfamily(z)
    points = list(points)
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    if not points:
        return ZkPartition((), (), k)
    net = FlowNetwork()
    s, t = ("s",), ("t",)
    for v in points:
        net.add_arc(s, ("p", v), 1)
        for pos, x in enumerate(z):
            if v in x:
                net.add_arc(("p", v), ("z", pos), 1)
    for pos in range(len(z)):
        net.add_arc(("z", pos), t, k)
    net.cap.setdefault(t, {})
    if net.max_flow(s, t) < len(points):
        return None
    groups: dict[int, list[int]] = {}
    for v in points:
        pos = next(key[1] for key, f in sorted(net.flow[("p", v)].items(), key=repr) if f > 0 and key[0] == "z")
        groups.setdefault(pos, []).append(v)
    order = sorted(groups, key=lambda p: points.index(groups[p][0]))
    return ZkPartition(tuple(tuple(groups[p]) for p in order), tuple(order), k)


# --- refinement ------------------------------------------------------------


@dataclass(frozen=True)
class RefinedPartition:
    # 0-based indices into the point list
    index_classes: tuple[tuple[int, ...], ...]
    betas: tuple[dict[int, int], ...]
    # (a_j, b_j) per class; None when l = 1 (no pair exists)
    anchors: tuple[tuple[int, int] | None, ...]

    def to_json(self) -> dict:
        return {
            "index_classes": [list(c) for c in self.index_classes],
            "betas": [{str(i): p for i, p in sorted(b.items())} for b in self.betas],
            "anchors": [list(a) if a else None for a in self.anchors],
        }


def validate_refined(points: Sequence[int], z: Sequence[Iterable[int]], k: int, ell: int, rp: RefinedPartition) -> list[str]:
    z = as_zfamily(z)
    problems = []
    n = k * ell
    if len(rp.index_classes) != k:
        problems.append(f"expected {k} classes, got {len(rp.index_classes)}")
    flat = [i for c in rp.index_classes for i in c]
    if sorted(flat) != list(range(n)):
        problems.append("classes do not partition the index set")
    for j, (cls, beta, anchor) in enumerate(zip(rp.index_classes, rp.betas, rp.anchors)):
        if len(cls) != ell:
            problems.append(f"class {j} has size {len(cls)} != {ell}")
        if set(beta) != set(cls):
            problems.append(f"beta {j} not defined exactly on its class")
        if len(set(beta.values())) != len(beta):
            problems.append(f"beta {j} is not injective")
        for i, pos in beta.items():
            if not 0 <= pos < len(z) or points[i] not in z[pos]:
                problems.append(f"point {i} not in Z[{pos}] (class {j})")
        if ell >= 2:
            if anchor is None:
                problems.append(f"class {j} lacks an anchor pair")
                continue
            a, b = anchor
            later = {c for cl in rp.index_classes[j:] for c in cl}
            if not (a in cls and b in cls and a < b):
                problems.append(f"anchor {anchor} of class {j} invalid")
            elif any(a < c < b for c in later):
                problems.append(f"anchor {anchor} of class {j} is separated by a later index")
    return problems


def refine_partition(points: Sequence[int], z: Sequence[Iterable[int]], k: int, ell: int, base: ZkPartition) -> RefinedPartition:
    """Split kl points into k classes of size l, each with an injection into Z and an anchor pair.

    Each round picks l points meeting every full class, at most one per class,
    with two of them consecutive among the points still unassigned; the rest
    is handled recursively with capacity k - 1.
    """
    z = as_zfamily(z)
    points = list(points)
    if len(points) != k * ell:
        raise ValueError(f"need exactly k*l = {k * ell} points, got {len(points)}")
    problems = validate_zk_partition(points, z, k, base)
    if problems:
        raise ValueError("base partition invalid: " + "; ".join(problems))
    idx = {v: i for i, v in enumerate(points)}
    # classes as index sets with their member position
    classes = [(set(idx[v] for v in c), pos) for c, pos in zip(base.classes, base.gamma)]
    out_classes, out_betas, out_anchors = [], [], []
    cap = k
    while cap >= 1:
        remaining = sorted(i for c, _ in classes for i in c)
        cls_of = {i: ci for ci, (c, _) in enumerate(classes) for i in c}
        if cap == 1:
            chosen = remaining
            pair = (remaining[0], remaining[1]) if ell >= 2 else None
        else:
            chosen, pair = _select(remaining, classes, cls_of, cap, ell)
        beta = {i: classes[cls_of[i]][1] for i in chosen}
        out_classes.append(tuple(sorted(chosen)))
        out_betas.append(beta)
        out_anchors.append(pair)
        for i in chosen:
            classes[cls_of[i]][0].discard(i)
        classes = [(c, pos) for c, pos in classes if c]
        cap -= 1
    return RefinedPartition(tuple(out_classes), tuple(out_betas), tuple(out_anchors))


def _select(remaining, classes, cls_of, cap, ell):
    full = sorted((ci for ci, (c, _) in enumerate(classes) if len(c) == cap), key=lambda ci: min(classes[ci][0]))
    chosen: list[int] = []
    used_cls: set[int] = set()
    pair = None
    if ell >= 2:
        for p in range(len(remaining) - 1):
            a, b = remaining[p], remaining[p + 1]
            ca, cb = cls_of[a], cls_of[b]
            if ca == cb:
                continue
            if full and ca not in full and cb not in full:
                continue
            pair = (a, b)
            break
        if pair is None:  # pragma: no cover - excluded by the counting argument
            raise AssertionError("no admissible consecutive pair")
        chosen += list(pair)
        used_cls |= {cls_of[pair[0]], cls_of[pair[1]]}
    for ci in full:
        if ci not in used_cls and len(chosen) < ell:
            chosen.append(min(classes[ci][0]))
            used_cls.add(ci)
    if any(ci not in used_cls for ci in full):  # pragma: no cover
        raise AssertionError("more full classes than l")
    # fill from unused classes, lowest index first
    for i in remaining:
        if len(chosen) >= ell:
            break
        if cls_of[i] not in used_cls:
            chosen.append(i)
            used_cls.add(cls_of[i])
    if len(chosen) != ell:  # pragma: no cover
        raise AssertionError("could not fill the selection")
    return chosen, pair


# --- linkage or separation ---------------------------------------------------


@dataclass(frozen=True)
class Linkage:
    paths: tuple[tuple[int, ...], ...]
    partition: ZkPartition

    @property
    def order(self) -> int:
        return len(self.paths)

    def to_json(self) -> dict:
        return {"paths": [list(p) for p in self.paths], "partition": self.partition.to_json()}


def validate_linkage(rg: RootedGraph, y: Iterable[int], k: int, order: int, lk: Linkage) -> list[str]:
    y = frozenset(y)
    g = rg.graph
    union_z = frozenset().union(*rg.z) if rg.z else frozenset()
    problems = []
    if lk.order != order:
        problems.append(f"linkage has order {lk.order}, expected {order}")
    seen: set[int] = set()
    for p in lk.paths:
        if not p:
            problems.append("empty path")
            continue
        if any(not g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
            problems.append(f"path {p} uses a non-edge")
        if len(set(p)) != len(p):
            problems.append(f"path {p} repeats a vertex")
        if seen & set(p):
            problems.append("paths are not vertex-disjoint")
        seen |= set(p)
        if p[0] not in union_z:
            problems.append(f"path {p} does not start in a member of Z")
        if p[-1] not in y:
            problems.append(f"path {p} does not end in Y")
    ends = [p[0] for p in lk.paths if p]
    problems += validate_zk_partition(ends, rg.z, k, lk.partition)
    return problems


def validate_linkage_separation(rg: RootedGraph, y: Iterable[int], k: int, ell: int, sep: Separation) -> list[str]:
    order, problems = validate_separation(rg.graph, sep)
    if problems:
        return problems
    outside = multiset_size(subtract_multiset(rg.z, sep.a_vertices))
    if not frozenset(y) <= sep.b_vertices:
        problems.append("Y not contained in V(B)")
    if outside > ell - 1:
        problems.append(f"||Z \\ A|| = {outside} exceeds l - 1")
    if not order < k * (ell - outside):
        problems.append(f"order {order} not below k(l - ||Z\\A||) = {k * (ell - outside)}")
    return problems


def linkage_or_separation(rg: RootedGraph, y: Iterable[int], k: int, ell: int) -> Separation | Linkage:
    """Either kl disjoint Z-to-Y paths whose Z-ends admit a (Z, k)-partition, or a
    separation (A, B) of order < k(l - ||Z \\ A||) with Y in B and ||Z \\ A|| <= l - 1.

    Auxiliary graph: each member Z_i gets k fresh vertices complete to it; vertex-disjoint
    paths from all fresh vertices to Y are routed by max-flow.
    """
    if k < 1 or ell < 1:
        raise ValueError("k and l must be positive")
    g = rg.graph
    y = frozenset(y)
    adj: dict = {v: set(g.adj[v]) for v in g.vertices}
    fresh = []
    for i, x in enumerate(rg.z):
        for j in range(k):
            w = ("W", i, j)
            fresh.append(w)
            adj[w] = set(x)
            for v in x:
                adj[v].add(w)
    res = route_vertex_disjoint(adj, fresh, y, limit=k * ell)
    if res.value >= k * ell:
        paths = []
        groups: dict[int, list[int]] = {}
        for p in res.paths:
            # a route may pass through other fresh vertices; keep the part after the last one
            last = max(i for i, v in enumerate(p) if isinstance(v, tuple))
            w, rest = p[last], p[last + 1:]
            # cut at the first vertex of Y
            cut = next(i for i, v in enumerate(rest) if v in y)
            path = tuple(rest[: cut + 1])
            paths.append(path)
            groups.setdefault(w[1], []).append(path[0])
        order = sorted(groups)
        part = ZkPartition(tuple(tuple(groups[i]) for i in order), tuple(order), k)
        paths.sort(key=lambda p: p[0])
        return Linkage(tuple(paths), part)
    a_side = {v for v in g.vertices if v in res.source_side}
    b_side = {v for v in g.vertices if v not in res.source_side or v in res.cut}
    return Separation.from_vertex_sides(g, a_side, b_side)
