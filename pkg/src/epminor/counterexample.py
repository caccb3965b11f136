"""Generators and verifiers for instances without the packing/covering duality."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .graph_core import Graph, RootedGraph, grid_graph
from .minor_model import Budget, BudgetExceeded, ModelOracle, _budget, find_hzl_model
from .pack_cover import Undecided, covering_number, packing_number


def figure1_instance(n: int) -> RootedGraph:
    """n x n grid; Z = (first column, first row, last column), corners removed."""
    if n < 2:
        raise ValueError("n must be at least 2")
    g = grid_graph(n, n)
    inner = range(2, n)
    z1 = frozenset(g.grid_vertex(i, 1) for i in inner)
    z2 = frozenset(g.grid_vertex(1, j) for j in inner)
    z3 = frozenset(g.grid_vertex(i, n) for i in inner)
    return RootedGraph(g, (z1, z2, z3))


@dataclass(frozen=True)
class NegativeInstance:
    rooted: RootedGraph
    # vertex sets of the grid components; the first one carries l - t + 1 members
    components: tuple[frozenset[int], ...]
    t: int
    ell: int
    n: int
    x: int

    @property
    def provenance(self) -> dict:
        return {"t": self.t, "l": self.ell, "n": self.n, "x": self.x}


def negative_family(h: Graph, ell: int, n: int, x: int = 0) -> NegativeInstance:
    """One grid of order (l - t + 2)n carrying l - t + 1 first-row blocks of width n, plus
    t - 1 grids of order n whose first rows are the remaining members (t = cc(H))."""
    t = len(h.components())
    if t > ell - 2:
        raise ValueError(f"H has {t} components; the construction needs cc(H) <= l - 2 = {ell - 2}")
    if n < 1 or x < 0:
        raise ValueError("need n >= 1 and x >= 0")
    big = (ell - t + 2) * n
    grids = [grid_graph(big, big)]
    offset = big * big
    for _ in range(t - 1):
        grids.append(grid_graph(n, n, offset))
        offset += n * n
    vertices = [v for g in grids for v in g.vertices]
    edges = [e for g in grids for e in g.edges]
    graph = Graph.from_edges(vertices, edges)
    g1 = grids[0]
    z = []
    for j in range(1, ell - t + 2):
        z.append(frozenset(g1.grid_vertex(1, i) for i in range(n * (j - 1) + 1, n * j + 1)))
    for j in range(ell - t + 2, ell + 1):
        z.append(frozenset(grids[j - ell + t - 1].row(1)))
    return NegativeInstance(RootedGraph(graph, tuple(z)), tuple(g.vertex_set for g in grids), t, ell, n, x)


def negative_threshold(h: Graph, x: int) -> int:
    """Order n from which the construction provably defeats deletion sets of size x."""
    return (14 * h.n + x + 1) * (x + 1) + x + 1


@dataclass
class NegativeReport:
    nu: int | None
    clause_a: bool | None
    clause_b: bool | None
    structural: bool | None
    tau: int | None = None
    # a set S with |S| <= x leaving no model, if clause (b) fails
    blocking_set: frozenset[int] | None = None
    threshold_n: int = 0
    provenance: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.clause_a and self.clause_b and self.structural is not False)

    def to_json(self) -> dict:
        return {
            "nu": self.nu,
            "tau": self.tau,
            "clause_a": self.clause_a,
            "clause_b": self.clause_b,
            "structural": self.structural,
            "blocking_set": None if self.blocking_set is None else sorted(self.blocking_set),
            "threshold_n": self.threshold_n,
            "provenance": self.provenance,
            "notes": self.notes,
        }


def _structural_ok(inst: NegativeInstance, h: Graph, model) -> bool:
    """Every companion grid holds the image of exactly one H-component."""
    comps = h.components()
    for grid in inst.components[1:]:
        inside = sum(1 for c in comps if frozenset().union(*(model.branch_sets[v] for v in c)) <= grid)
        if inside != 1:
            return False
    return True


def verify_negative(
    inst: NegativeInstance | RootedGraph,
    h: Graph,
    ell: int,
    x: int,
    budget: Budget | int | None = None,
    with_tau: bool = False,
) -> NegativeReport:
    """(a) the packing number is 1; (b) every S with |S| <= x leaves a model in G - S."""
    b = _budget(budget)
    rg = inst.rooted if isinstance(inst, NegativeInstance) else inst
    rep = NegativeReport(None, None, None, None, threshold_n=negative_threshold(h, x))
    if isinstance(inst, NegativeInstance):
        rep.provenance = {**inst.provenance, "x": x}
    try:
        model = find_hzl_model(rg, h, ell, b)
        if isinstance(inst, NegativeInstance) and model is not None:
            rep.structural = _structural_ok(inst, h, model)
        pk = packing_number(rg, h, ell, False, b)
        rep.nu = pk.nu
        rep.clause_a = pk.nu == 1
        oracle = ModelOracle(rg, h, ell, False, b)
        rep.clause_b = True
        verts = rg.graph.vertex_set
        for size in range(0, min(x, rg.graph.n) + 1):
            for s in combinations(sorted(verts), size):
                if not oracle.exists(verts - frozenset(s)):
                    rep.clause_b = False
                    rep.blocking_set = frozenset(s)
                    break
            if not rep.clause_b:
                break
        if with_tau:
            rep.tau = covering_number(rg, h, ell, False, b).tau
    except (BudgetExceeded, Undecided) as exc:
        rep.notes.append(f"undecided: {exc}")
    return rep
