"""Recursion skeleton for packing or covering rooted models: thresholds, separating a
large grid from most of Z, reduction across separations, irrelevant vertices, and the
end-to-end pipeline. Every answer the pipeline emits is re-certified by the oracles."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Callable

import networkx as nx

from .graph_core import Graph, RootedGraph, Separation, ZFamily, multiset_size, subtract_multiset
from .minor_model import (
    DEFAULT_BUDGET,
    Budget,
    BudgetExceeded,
    ModelFunction,
    ModelOracle,
    PureModelWitness,
    validate_hzl_model,
    validate_pure_witness,
)
from .pack_cover import has_deletion_set_of_size, is_deletion_set
from .patterns import grid_host_order
from .rooted_grid import (
    GridModel,
    GridSeparation,
    Inconclusive,
    RootedGridModel,
    Variant,
    copies_of_grid,
    models_from_rooted_grid,
    restrict_grid_model,
    rooted_grid_or_separation,
)
from .treewidth_ep import bounded_tw_pack_or_hit, heuristic_td, validate_td

# --- thresholds ----------------------------------------------------------------
# All formulas accept sympy expressions; ``side`` is the grid order known to host H
# (14h in the general statement).


def x_threshold(k, ell):
    return k * ell**2


def g_threshold(k, ell, h, side=None):
    s = 14 * h if side is None else side
    x = x_threshold(k, ell)
    return 2 * (4 * x**2 + s * x + 3 * x + 1) * (4 * x**2 + 1) + x


def f1_threshold(k, ell, h, kappa: Callable, side=None, safe: bool = False):
    """Pure covering bound; ``safe`` uses kappa(g) + 1 in the bounded-treewidth term."""
    kap = kappa(g_threshold(k, ell, h, side))
    base = (kap + 1 if safe else kap) * (h**2 - h + 1) * (k - 1)
    if ell == 1:
        return base
    return base + (ell - 1) * f1_threshold(k, ell - 1, h, kappa, side, safe) + k * ell**2


def f_threshold(k, ell, h, kappa: Callable, side=None, safe: bool = False):
    return ell * f1_threshold(k, ell, h, kappa, side, safe) + k * ell**2


def separation_grid_bound(k, ell, side):
    """Grid order sufficient to separate a large grid from most of Z."""
    return 2 * (k * ell * (side + 2) + 1) * (k**2 * ell**2 + 1)


def irrelevant_bound_empty(x, side):
    return (x**2 + side * x + 2 * x + 1) * (x**2 + 1)


def irrelevant_bound_one(x, side):
    return 2 * (4 * x**2 + side * x + 3 * x + 1) * (4 * x**2 + 1)


@dataclass
class EngineConfig:
    use_paper_constants: bool = True
    # treewidth bound of the grid extraction; an opaque input, identity by default
    kappa: Callable[[Any], Any] = lambda g: g
    # order of a grid known to host H; None means 14h with the general constants, else the smallest one
    side: int | None = None
    permissive: bool = True
    budget: int = DEFAULT_BUDGET
    # the bounded-treewidth branch enumerates minimal models; larger graphs are reported undecided
    tw_max_n: int = 30

    def grid_side(self, h: Graph) -> int:
        if self.side is not None:
            return self.side
        return 14 * h.n if self.use_paper_constants else grid_host_order(h)

    def thresholds(self, k: int, ell: int, h: Graph) -> dict:
        s = None if self.use_paper_constants else self.grid_side(h)
        return {
            "x": x_threshold(k, ell),
            "g": g_threshold(k, ell, h.n, s),
            "f1": f1_threshold(k, ell, h.n, self.kappa, s),
            "f": f_threshold(k, ell, h.n, self.kappa, s),
            "f_safe": f_threshold(k, ell, h.n, self.kappa, s, safe=True),
        }


# --- separating a grid from most of Z -----------------------------------------


@dataclass
class DisjointModels:
    pattern: Graph
    models: list[ModelFunction]


@dataclass
class QualifiedSeparation:
    separation: Separation
    ell_prime: int
    # grid model inside B - V(A)
    grid: GridModel
    # rooted grid model for Z \ A inside B - V(A); None when l' = 0
    rooted: RootedGridModel | None
    z_outside: ZFamily


def separate_or_models(rg: RootedGraph, m: GridModel, k: int, side: int, ell: int, permissive: bool = True) -> DisjointModels | QualifiedSeparation:
    """k disjoint models of l* copies of G_side meeting l members each, or a separation of
    order < kl^2 leaving l' < l members outside A together with a grid and a rooted grid in B - V(A).

    The separation is refined step by step: each step either finds a rooted grid for the
    members still outside A, or cuts off at least one more member.
    """
    n_root = k * ell * (side + 2) + 1
    if not permissive and m.order < separation_grid_bound(k, ell, side):
        raise ValueError(f"grid order {m.order} below {separation_grid_bound(k, ell, side)}")
    g = rg.graph
    if rg.size <= ell - 1:
        sep, grid = Separation.trivial(g), m
    else:
        res = rooted_grid_or_separation(rg, m, n_root, k, ell, permissive)
        if isinstance(res, RootedGridModel):
            variant = Variant.REDUCED if ell >= 2 else Variant.FULL
            pattern, models = models_from_rooted_grid(rg, res, side, variant)
            return DisjointModels(pattern, models)
        sep, grid = res.separation, res.grid
    for t in range(ell - 1):
        y = subtract_multiset(rg.z, sep.a_vertices)
        ny = multiset_size(y)
        if ny < ell - 1 - t:
            continue
        sub = RootedGraph(g.induced(sep.b_only), y)
        res = rooted_grid_or_separation(sub, grid, n_root, k, ny, permissive)
        if isinstance(res, RootedGridModel):
            return QualifiedSeparation(sep, ny, grid, res, y)
        c = res.separation
        a_side = sep.a_vertices | c.a_vertices
        b_side = c.b_vertices | sep.separator
        sep, grid = Separation.from_vertex_sides(g, a_side, b_side), res.grid
    y = subtract_multiset(rg.z, sep.a_vertices)
    return QualifiedSeparation(sep, multiset_size(y), grid, None, y)


def validate_qualified_separation(rg: RootedGraph, k: int, ell: int, side: int, qs: QualifiedSeparation) -> list[str]:
    from .graph_core import validate_separation
    from .rooted_grid import validate_grid_model, validate_rooted_grid_model

    order, problems = validate_separation(rg.graph, qs.separation)
    if problems:
        return problems
    if not order < k * ell * ell:
        problems.append(f"order {order} not below kl^2 = {k * ell * ell}")
    outside = multiset_size(subtract_multiset(rg.z, qs.separation.a_vertices))
    if outside != qs.ell_prime or not outside < ell:
        problems.append(f"||Z \\ A|| = {outside} does not match l' = {qs.ell_prime} < l")
    problems += validate_grid_model(rg.graph, qs.grid)
    if not qs.grid.image <= qs.separation.b_only:
        problems.append("grid not inside B - V(A)")
    if qs.rooted is not None:
        sub = RootedGraph(rg.graph.induced(qs.separation.b_only), qs.z_outside)
        problems += validate_rooted_grid_model(sub, qs.rooted, k, qs.ell_prime)
        if qs.rooted.order < k * ell * (side + 2) + 1:
            problems.append("rooted grid too small")
    return problems


# --- reduction and irrelevant vertices -------------------------------------------


def reduce_across_separation(rg: RootedGraph, sep: Separation, ell: int, ell_prime: int, t) -> frozenset[int]:
    """Lift a pure deletion set of A - V(B) (for the members inside A and l - l') to G."""
    outside = multiset_size(subtract_multiset(rg.z, sep.a_vertices))
    if outside != ell_prime or not 1 <= ell_prime < ell:
        raise ValueError(f"need ||Z \\ A|| = l' with 1 <= l' < l (got {outside}, l'={ell_prime}, l={ell})")
    t = frozenset(t)
    if not t <= sep.a_only:
        raise ValueError("T must lie in A - V(B)")
    return t | sep.separator


def inner_instance(rg: RootedGraph, sep: Separation) -> RootedGraph:
    """A - V(B) with the members contained in V(A); the others become empty."""
    a = sep.a_vertices
    keep = sep.a_only
    z = tuple(x & keep if x <= a else frozenset() for x in rg.z)
    return RootedGraph(rg.graph.induced(keep), z)


class Mode(enum.Enum):
    Z_EMPTY = "z_empty"
    Z_ONE = "z_one"


def irrelevant_vertex_candidate(rg: RootedGraph, sep: Separation, m: GridModel | RootedGridModel | None, mode: Mode) -> int:
    """The vertex in the last-row, last-column branch set of the rooted grid ``m``, or any
    vertex of B - V(A) when the separation has order 0."""
    outside = multiset_size(subtract_multiset(rg.z, sep.a_vertices))
    if mode is Mode.Z_EMPTY and outside != 0:
        raise ValueError("Z_EMPTY needs every member inside A")
    if mode is Mode.Z_ONE and outside > 1:
        raise ValueError("Z_ONE needs at most one member leaving A")
    if sep.order == 0:
        if not sep.b_only:
            raise ValueError("B - V(A) is empty")
        return min(sep.b_only)
    if m is None:
        raise ValueError("a rooted grid model is needed for a separation of positive order")
    grid = m.grid if isinstance(m, RootedGridModel) else m
    return min(grid.branch(grid.rows, grid.cols))


def _b_side(rg: RootedGraph, sep: Separation) -> Graph:
    return Graph.from_edges(sorted(sep.b_vertices), sep.b_edges)


def find_irrelevant_vertex(rg: RootedGraph, sep: Separation, grid: GridModel, mode: Mode, side: int, permissive: bool = True, trace: list | None = None) -> int:
    """Follow the inductive argument: link the separator into the grid as a rooted grid
    (then the far corner is irrelevant) or find a smaller separation and recurse.

    ``grid`` must lie in B - V(A)."""
    trace = trace if trace is not None else []
    outside = subtract_multiset(rg.z, sep.a_vertices)
    n_out = multiset_size(outside)
    w = sep.separator
    x = len(w)
    if x == 0:
        trace.append({"branch": "irrelevant/base", "order": 0})
        return irrelevant_vertex_candidate(rg, sep, None, Mode.Z_EMPTY if n_out == 0 else Mode.Z_ONE)
    bg = _b_side(rg, sep)
    if mode is Mode.Z_EMPTY or n_out == 0:
        if n_out:
            raise ValueError("Z_EMPTY needs every member inside A")
        xp = x * x + side * x + 2 * x
        res = rooted_grid_or_separation(RootedGraph(bg, (w,)), grid, xp, x, 1, permissive)
        if isinstance(res, RootedGridModel):
            trace.append({"branch": "irrelevant/rooted_grid", "mode": "z_empty", "order": x, "grid": xp})
            return irrelevant_vertex_candidate(rg, sep, res, Mode.Z_EMPTY)
        new = Separation.from_vertex_sides(rg.graph, sep.a_vertices | res.separation.a_vertices, res.separation.b_vertices)
        trace.append({"branch": "irrelevant/shrink", "mode": "z_empty", "order": new.order})
        return find_irrelevant_vertex(rg, new, res.grid, Mode.Z_EMPTY, side, permissive, trace)
    if n_out > 1:
        raise ValueError("Z_ONE needs at most one member leaving A")
    ya = next(y for y in outside if y)
    xp = 2 * (4 * x * x + side * x + 3 * x)
    res = rooted_grid_or_separation(RootedGraph(bg, (w, ya)), grid, xp, x, 2, permissive)
    if isinstance(res, RootedGridModel):
        trace.append({"branch": "irrelevant/rooted_grid", "mode": "z_one", "order": x, "grid": xp})
        return irrelevant_vertex_candidate(rg, sep, res, Mode.Z_ONE)
    a2 = res.separation.a_vertices
    new = Separation.from_vertex_sides(rg.graph, sep.a_vertices | a2, res.separation.b_vertices)
    nxt = Mode.Z_ONE if (w <= a2 and not ya <= a2) else Mode.Z_EMPTY
    trace.append({"branch": "irrelevant/shrink", "mode": nxt.value, "order": new.order})
    return find_irrelevant_vertex(rg, new, res.grid, nxt, side, permissive, trace)


# --- pipeline ------------------------------------------------------------------------


@dataclass
class _Out:
    # pairwise disjoint regions, each holding one model
    regions: list[frozenset[int]] | None = None
    deletion: frozenset[int] | None = None


@dataclass
class PipelineReport:
    status: str  # ok | undecided
    k: int
    ell: int
    pure: bool
    kind: str | None = None  # packing | deletion_set
    witnesses: list = field(default_factory=list)
    deletion_set: frozenset[int] | None = None
    bound_f: Any = None
    trace: list[dict] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "kind": self.kind,
            "k": self.k,
            "l": self.ell,
            "pure": self.pure,
            "witnesses": [w.to_json() for w in self.witnesses],
            "deletion_set": None if self.deletion_set is None else sorted(self.deletion_set),
            "deletion_size": None if self.deletion_set is None else len(self.deletion_set),
            "bound_f": None if self.bound_f is None else str(self.bound_f),
            "note": self.note,
        }

    def trace_lines(self) -> str:
        return "\n".join(json.dumps(t, sort_keys=True) for t in self.trace)


def _k_subgrids(grid: GridModel, k: int, side: int) -> list[frozenset[int]] | None:
    """Images of k disjoint side x side subgrids along the top of ``grid``."""
    if grid.rows < side or grid.cols < k * side:
        return None
    out = []
    for j in range(k):
        cells = [(r, c) for r in range(1, side + 1) for c in range(j * side + 1, (j + 1) * side + 1)]
        out.append(frozenset().union(*(grid.branch(*c) for c in cells)))
    return out


class _Pipeline:
    def __init__(self, cfg: EngineConfig, budget: Budget):
        self.cfg = cfg
        self.budget = budget
        self.trace: list[dict] = []

    def log(self, depth: int, branch: str, **kw):
        self.trace.append({"depth": depth, "branch": branch, **kw})

    def solve(self, rg: RootedGraph, h: Graph, ell: int, k: int, pure: bool, grid: GridModel | None, depth: int, td=None) -> _Out:
        if rg.size < ell:
            self.log(depth, "trivial", n=rg.graph.n, members=rg.size)
            return _Out(deletion=frozenset())
        if grid is not None:
            width = (td or heuristic_td(rg.graph)).width
            g_needed = self.cfg.thresholds(k, ell, h)["g"]
            kap = self.cfg.kappa(g_needed)
            try:
                small = width <= kap
            except TypeError:
                small = True
            if not small:
                try:
                    out = self._grid_branch(rg, h, ell, k, pure, grid, depth)
                    if out is not None:
                        return out
                except Inconclusive as exc:
                    self.log(depth, "grid/inconclusive", reason=str(exc))
        return self._tw_branch(rg, h, ell, k, pure, depth, td)

    def _tw_branch(self, rg, h, ell, k, pure, depth, td=None) -> _Out:
        if rg.graph.n > self.cfg.tw_max_n:
            self.log(depth, "bounded_treewidth/too_large", n=rg.graph.n)
            raise BudgetExceeded(f"bounded-treewidth branch capped at {self.cfg.tw_max_n} vertices (got {rg.graph.n})")
        res = bounded_tw_pack_or_hit(rg, h, ell, k, td, pure, self.budget)
        self.log(depth, "bounded_treewidth", n=rg.graph.n, width=res.width, kind=res.kind, tree_nu=res.tree_nu, tree_tau=res.tree_tau)
        if res.models is not None:
            return _Out(regions=list(res.models))
        return _Out(deletion=res.deletion_set)

    def _fits(self, rg, h, ell, pure, regions) -> bool:
        oracle = ModelOracle(rg, h, ell, pure, self.budget)
        return all(oracle.exists(r) for r in regions)

    def _grid_branch(self, rg, h, ell, k, pure, grid, depth) -> _Out | None:
        side = self.cfg.grid_side(h)
        cc = len(h.components())
        res = separate_or_models(rg, grid, k, side, ell, self.cfg.permissive)
        if isinstance(res, DisjointModels):
            regions = [m.image for m in res.models]
            self.log(depth, "grid/disjoint_models", count=len(regions))
            if self._fits(rg, h, ell, pure, regions):
                return _Out(regions=regions)
            self.log(depth, "grid/completion_failed")
            return None
        sep = res.separation
        lp = res.ell_prime
        self.log(depth, "grid/separation", order=sep.order, ell_prime=lp)
        inner = inner_instance(rg, sep)
        as_pure = pure or cc == 1
        if as_pure and (lp == 0 or (ell == 2 and cc == 1 and lp == 1)):
            mode = Mode.Z_EMPTY if lp == 0 else Mode.Z_ONE
            sub_trace: list = []
            v = find_irrelevant_vertex(rg, sep, res.grid, mode, side, self.cfg.permissive, sub_trace)
            self.log(depth, "irrelevant_vertex", vertex=v, mode=mode.value, steps=sub_trace)
            smaller = rg.remove([v])
            g2 = grid if v not in grid.image else (restrict_grid_model(grid, {v}) if grid.order > 1 else None)
            out = self.solve(smaller, h, ell, k, pure, g2, depth + 1)
            if out.regions is not None:
                return out
            t = out.deletion
            if is_deletion_set(rg, h, ell, t, pure, self.budget):
                return out
            alt = has_deletion_set_of_size(rg, h, ell, len(t), pure, self.budget)
            if alt is not None:
                self.log(depth, "irrelevant_vertex/resized", size=len(alt))
                return _Out(deletion=alt)
            self.log(depth, "irrelevant_vertex/not_confirmed")
            return _Out(deletion=t | {v})
        if lp == 0:
            # ordinary models, several components: pure sub-instance, then complete with grids
            sub = self.solve(inner, h, ell, k, True, None, depth + 1)
            if sub.deletion is not None:
                return _Out(deletion=sub.deletion | sep.separator)
            grids = _k_subgrids(res.grid, k, side)
            if grids is None:
                self.log(depth, "grid/too_small_for_completion")
                return None
            regions = [a | b for a, b in zip(sub.regions[:k], grids)]
            if self._fits(rg, h, ell, pure, regions):
                return _Out(regions=regions)
            self.log(depth, "grid/completion_failed")
            return None
        b_rg = RootedGraph(rg.graph.induced(sep.b_only), res.z_outside)
        if cc >= ell or lp >= 2:
            variant = Variant.FULL if cc >= ell else Variant.REDUCED
            sub = self.solve(inner, h, ell - lp, k, True, None, depth + 1)
            if sub.deletion is not None:
                return _Out(deletion=reduce_across_separation(rg, sep, ell, lp, sub.deletion))
            _, outer = models_from_rooted_grid(b_rg, res.rooted, side, variant)
            regions = [a | m.image for a, m in zip(sub.regions[:k], outer)]
            if self._fits(rg, h, ell, pure, regions):
                return _Out(regions=regions)
            self.log(depth, "grid/completion_failed")
            return None
        # cc(H) = l - 1 and l' = 1: one sub-instance per choice of l - 2 components
        comps = h.components()
        union: set[int] = set()
        for choice in itertools.combinations(range(len(comps)), ell - 2):
            hp = h.induced(frozenset().union(*(comps[i] for i in choice)))
            sub = self.solve(inner, hp, ell - 1, k, True, None, depth + 1)
            if sub.regions is not None:
                _, outer = models_from_rooted_grid(b_rg, res.rooted, side, Variant.FULL)
                regions = [a | m.image for a, m in zip(sub.regions[:k], outer)]
                if self._fits(rg, h, ell, pure, regions):
                    return _Out(regions=regions)
                self.log(depth, "grid/completion_failed")
                return None
            union |= sub.deletion
        return _Out(deletion=frozenset(union) | sep.separator)


def _is_planar(h: Graph) -> bool:
    gx = nx.Graph()
    gx.add_nodes_from(h.vertices)
    gx.add_edges_from(h.edges)
    return nx.check_planarity(gx)[0]


def ep_pipeline(
    rg: RootedGraph,
    h: Graph,
    ell: int,
    k: int,
    cfg: EngineConfig | None = None,
    pure: bool = False,
    grid: GridModel | None = None,
    td=None,
) -> PipelineReport:
    """k disjoint (pure) (H, Z, l)-models or a deletion set; the answer is certified by the
    model oracles before it is reported, otherwise the status is ``undecided``."""
    cfg = cfg or EngineConfig()
    if h.n == 0:
        raise ValueError("H must be non-empty")
    if len(h.components()) < ell - 1:
        raise ValueError(f"H has {len(h.components())} components; at least l - 1 = {ell - 1} are required")
    if not _is_planar(h):
        raise ValueError("H must be planar")
    if k < 1 or ell < 1:
        raise ValueError("k and l must be positive")
    if td is not None:
        _, problems = validate_td(rg.graph, td)
        if problems:
            raise ValueError("invalid tree decomposition: " + "; ".join(problems))
    budget = Budget(cfg.budget)
    pipe = _Pipeline(cfg, budget)
    rep = PipelineReport(status="undecided", k=k, ell=ell, pure=pure)
    try:
        rep.bound_f = cfg.thresholds(k, ell, h)["f_safe"]
    except Exception:  # pragma: no cover - exotic kappa
        rep.bound_f = None
    try:
        out = pipe.solve(rg, h, ell, k, pure, grid, 0, td)
        rep.trace = pipe.trace
        if out.regions is not None:
            rep.kind = "packing"
            oracle = ModelOracle(rg, h, ell, pure, budget)
            wits = []
            for region in out.regions[:k]:
                w = oracle.realize(oracle.minimal_support(region))
                if w is None:
                    problems = ["region holds no model"]
                elif isinstance(w, PureModelWitness):
                    problems = validate_pure_witness(rg, h, ell, w)
                else:
                    problems = validate_hzl_model(rg, h, ell, w)
                if problems:
                    rep.note = "witness failed validation: " + "; ".join(problems)
                    return rep
                wits.append(w)
            images = [w.image for w in wits]
            if len(wits) < k or any(not images[i].isdisjoint(images[j]) for i in range(len(images)) for j in range(i)):
                rep.note = "packing not certified"
                return rep
            rep.witnesses = wits
            rep.status = "ok"
        else:
            rep.kind = "deletion_set"
            if not is_deletion_set(rg, h, ell, out.deletion, pure, budget):
                rep.note = "deletion set not certified"
                return rep
            rep.deletion_set = out.deletion
            rep.status = "ok"
    except BudgetExceeded as exc:
        rep.trace = pipe.trace
        rep.note = f"budget exhausted: {exc}"
    return rep
