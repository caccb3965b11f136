"""Tree decompositions, packing or hitting subforests of a tree, and the lift
to rooted models in graphs with a given tree decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .graph_core import Graph, RootedGraph, components_within, is_connected_within
from .minor_model import Budget, ModelOracle, _budget
from .pack_cover import _minimal_supports_any, _minimal_supports_connected, is_deletion_set, max_disjoint

SUPPORT_CAP = 5000


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: Mapping[int, frozenset[int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def nodes_of(self, v: int) -> frozenset[int]:
        return frozenset(t for t, b in self.bags.items() if v in b)

    def to_json(self) -> dict:
        return {
            "tree_edges": [list(e) for e in sorted(self.tree.edges)],
            "bags": {str(t): sorted(b) for t, b in sorted(self.bags.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> TreeDecomposition:
        bags = {int(t): frozenset(b) for t, b in data["bags"].items()}
        return cls(Graph.from_edges(sorted(bags), data.get("tree_edges", [])), bags)


def validate_td(g: Graph, td: TreeDecomposition) -> tuple[int | None, list[str]]:
    """(width, []) when valid; otherwise (None, violations) with the axiom named first."""
    t = td.tree
    problems = []
    if set(td.bags) != set(t.vertices):
        problems.append("bags do not match the tree nodes")
        return None, problems
    if t.n and (t.m != t.n - 1 or not t.is_connected()):
        problems.append("decomposition graph is not a tree")
    covered = frozenset().union(*td.bags.values()) if td.bags else frozenset()
    if not g.vertex_set <= covered:
        problems.append("(T1) bags do not cover every vertex")
    for u, v in sorted(g.edges):
        if not any(u in b and v in b for b in td.bags.values()):
            problems.append(f"(T2) edge {(u, v)} lies in no bag")
            break
    for v in g.vertices:
        nodes = td.nodes_of(v)
        if nodes and not is_connected_within(t.adj, nodes):
            problems.append(f"(T3) bags containing {v} are not connected in the tree")
            break
    if problems:
        return None, problems
    return td.width, []


def heuristic_td(g: Graph) -> TreeDecomposition:
    """Min-degree elimination heuristic (networkx), relabelled to integer nodes and made a tree."""
    if g.n == 0:
        return TreeDecomposition(Graph.from_edges([0], []), {0: frozenset()})
    gx = nx.Graph()
    gx.add_nodes_from(g.vertices)
    gx.add_edges_from(g.edges)
    _, dec = nx.algorithms.approximation.treewidth_min_degree(gx)
    nodes = sorted(dec.nodes, key=lambda b: (sorted(b), len(b)))
    idx = {b: i for i, b in enumerate(nodes)}
    edges = [(idx[a], idx[b]) for a, b in dec.edges]
    tree = Graph.from_edges(range(len(nodes)), edges)
    comps = tree.components()
    # join a forest into a tree
    edges += [(min(comps[0]), min(c)) for c in comps[1:]]
    tree = Graph.from_edges(range(len(nodes)), edges)
    return TreeDecomposition(tree, {idx[b]: frozenset(b) for b in nodes})


# --- d-subtrees ------------------------------------------------------------


def subtree_hitting_bound(d: int, k: int) -> int:
    return (d * d - d + 1) * (k - 1)


@dataclass
class SubtreeResult:
    k: int
    d: int
    nu: int
    tau: int
    # indices of pairwise disjoint members (when nu >= k, the first k are returned)
    packing: list[int] | None
    hitting_set: frozenset[int] | None
    bound: int

    @property
    def kind(self) -> str:
        return "packing" if self.packing is not None else "hitting_set"


def min_hitting_set(sets: Sequence[frozenset[int]], budget: Budget | None = None) -> frozenset[int]:
    """Exact minimum hitting set by branching on the smallest unhit set."""
    sets = [s for s in {frozenset(s) for s in sets}]
    if any(not s for s in sets):
        raise ValueError("an empty set cannot be hit")
    best: frozenset[int] | None = None

    def lower(unhit: list[frozenset[int]]) -> int:
        # greedy disjoint subfamily gives a lower bound
        used: set[int] = set()
        c = 0
        for s in sorted(unhit, key=len):
            if used.isdisjoint(s):
                used |= s
                c += 1
        return c

    def rec(chosen: frozenset[int], unhit: list[frozenset[int]]):
        nonlocal best
        if budget is not None:
            budget.tick()
        if not unhit:
            if best is None or len(chosen) < len(best):
                best = chosen
            return
        if best is not None and len(chosen) + lower(unhit) >= len(best):
            return
        s = min(unhit, key=lambda x: (len(x), sorted(x)))
        for v in sorted(s):
            rec(chosen | {v}, [u for u in unhit if v not in u])

    rec(frozenset(), sets)
    return best if best is not None else frozenset()


def d_subtree_pack_or_hit(tree: Graph, family: Sequence[Iterable[int]], k: int, d: int | None = None, budget: Budget | int | None = None) -> SubtreeResult:
    """k pairwise disjoint members, or a hitting set of size at most (d^2 - d + 1)(k - 1).

    Both optima are computed exactly and the bound is asserted against them.
    """
    if tree.n and (tree.m != tree.n - 1 or not tree.is_connected()):
        raise ValueError("host is not a tree")
    if k < 1:
        raise ValueError("k must be positive")
    b = _budget(budget)
    members = [frozenset(f) for f in family]
    for f in members:
        if not f <= tree.vertex_set:
            raise ValueError("member leaves the tree")
    comps = max((len(components_within(tree.adj, f)) for f in members), default=0)
    if d is None:
        d = max(comps, 1)
    if comps > d:
        raise ValueError(f"a member has {comps} components, more than d = {d}")
    packing = max_disjoint(members, b)
    nu = len(packing)
    hit = min_hitting_set(members, b) if members else frozenset()
    tau = len(hit)
    bound = subtree_hitting_bound(d, k)
    if nu < k and tau > bound:  # pragma: no cover - would contradict the hitting bound
        raise AssertionError(f"packing {nu} < k={k} and hitting set {tau} > {bound}")
    if nu >= k:
        idx = [members.index(p) for p in packing[:k]]
        return SubtreeResult(k, d, nu, tau, idx, None, bound)
    return SubtreeResult(k, d, nu, tau, None, hit, bound)


# --- lift to graphs of bounded treewidth ---------------------------------------


@dataclass
class BoundedTwResult:
    k: int
    width: int
    models: list[frozenset[int]] | None
    deletion_set: frozenset[int] | None
    tight_bound: int
    safe_bound: int
    tree_nu: int
    tree_tau: int
    notes: list[str] = field(default_factory=list)

    @property
    def kind(self) -> str:
        return "packing" if self.models is not None else "deletion_set"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "width": self.width,
            "models": None if self.models is None else [sorted(m) for m in self.models],
            "deletion_set": None if self.deletion_set is None else sorted(self.deletion_set),
            "tight_bound": self.tight_bound,
            "safe_bound": self.safe_bound,
            "tree_nu": self.tree_nu,
            "tree_tau": self.tree_tau,
            "notes": self.notes,
        }


def bounded_tw_pack_or_hit(
    rg: RootedGraph,
    h: Graph,
    ell: int,
    k: int,
    td: TreeDecomposition | None = None,
    pure: bool = False,
    budget: Budget | int | None = None,
) -> BoundedTwResult:
    """Map every inclusion-minimal model to the tree nodes whose bags meet it, solve the
    subtree problem there, and pull the answer back: disjoint node sets give disjoint
    models, and the bags of a node hitting set form a deletion set."""
    g = rg.graph
    td = td or heuristic_td(g)
    width, problems = validate_td(g, td)
    if problems:
        raise ValueError("invalid tree decomposition: " + "; ".join(problems))
    b = _budget(budget)
    oracle = ModelOracle(rg, h, ell, pure, b)
    cc = len(h.components())
    if cc == 1:
        supports = []
        for comp in components_within(g.adj, g.vertex_set):
            supports += _minimal_supports_connected(oracle, comp)
    else:
        supports = _minimal_supports_any(oracle, g.vertex_set)
    if len(supports) > SUPPORT_CAP:
        raise ValueError(f"more than {SUPPORT_CAP} minimal models; instance too large")
    node_sets = []
    for s in supports:
        nodes = frozenset().union(*(td.nodes_of(v) for v in s))
        ncomp = len(components_within(td.tree.adj, nodes))
        if ncomp > cc:  # pragma: no cover - follows from the decomposition axioms
            raise AssertionError("model maps to more subtrees than H has components")
        node_sets.append(nodes)
    hv = max(h.n, 1)
    tight = (width - 1) * subtree_hitting_bound(hv, k)
    safe = (width + 1) * subtree_hitting_bound(hv, k)
    res = d_subtree_pack_or_hit(td.tree, node_sets, k, d=hv, budget=b)
    out = BoundedTwResult(k, width, None, None, tight, safe, res.nu, res.tau)
    if res.packing is not None:
        models = [supports[i] for i in res.packing]
        for i in range(len(models)):
            for j in range(i):
                if not models[i].isdisjoint(models[j]):  # pragma: no cover
                    raise AssertionError("disjoint node images gave intersecting models")
        out.models = models
        return out
    deletion = frozenset().union(*(td.bags[t] for t in res.hitting_set)) if res.hitting_set else frozenset()
    if not is_deletion_set(rg, h, ell, deletion, pure, b):  # pragma: no cover
        raise AssertionError("bag union does not meet every model")
    if len(deletion) > safe:  # pragma: no cover
        raise AssertionError(f"deletion set of size {len(deletion)} exceeds (w+1)(h^2-h+1)(k-1) = {safe}")
    if len(deletion) > tight:
        out.notes.append(f"deletion set size {len(deletion)} exceeds the (w-1) form {tight}")
    out.deletion_set = deletion
    return out
