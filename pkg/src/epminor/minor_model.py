"""Minor-model functions, (H, Z, l)-models and pure (H, Z, l)-models.

Searches are exact and exploit two facts:

* a model may absorb the whole connected component it lives in, so ordinary
  existence only depends on which host components carry which pattern
  components;
* existence is monotone under adding vertices, so an inclusion-minimal
  support can be found by deletion-based shrinking.

Every search is charged against a :class:`Budget`; running out raises
:class:`BudgetExceeded`, which callers must treat as "undecided".
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .flow import FlowNetwork
from .graph_core import (
    Edge,
    Graph,
    RootedGraph,
    ZFamily,
    as_zfamily,
    components_within,
    is_connected_within,
    multiset_size,
    norm_edge,
)
from .patterns import components_of

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The configured work budget ran out before the question was decided."""


@dataclass
class Budget:
    limit: int = DEFAULT_BUDGET
    used: int = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"budget of {self.limit} steps exhausted")


def _budget(b: Budget | int | None) -> Budget:
    if b is None:
        return Budget()
    if isinstance(b, int):
        return Budget(b)
    return b


@dataclass(frozen=True)
class ModelFunction:
    branch_sets: Mapping[int, frozenset[int]]
    branch_edges: Mapping[Edge, Edge] = field(default_factory=dict)

    @property
    def image(self) -> frozenset[int]:
        out: set[int] = set()
        for b in self.branch_sets.values():
            out |= b
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "branch_sets": {str(h): sorted(b) for h, b in sorted(self.branch_sets.items())},
            "branch_edges": [[list(e), list(g)] for e, g in sorted(self.branch_edges.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> ModelFunction:
        bs = {int(h): frozenset(v) for h, v in data["branch_sets"].items()}
        be = {tuple(e): tuple(g) for e, g in data.get("branch_edges", [])}
        return cls(bs, be)


@dataclass(frozen=True)
class PureModelWitness:
    # indices into the component list of H (ordered by minimum vertex)
    component_subset: tuple[int, ...]
    model: ModelFunction
    # component index -> positions in Z
    alpha: Mapping[int, tuple[int, ...]]

    @property
    def image(self) -> frozenset[int]:
        return self.model.image

    def to_json(self) -> dict:
        return {
            "components": list(self.component_subset),
            "model": self.model.to_json(),
            "alpha": {str(i): list(a) for i, a in sorted(self.alpha.items())},
        }


# --- validation --------------------------------------------------------------


def validate_model_function(g: Graph, h: Graph, eta: ModelFunction) -> list[str]:
    """Empty list iff ``eta`` is a minor-model function of ``h`` in ``g``; else the violations."""
    problems: list[str] = []
    if set(eta.branch_sets) != set(h.vertices):
        problems.append("branch sets do not match the vertices of H")
        return problems
    for hv in h.vertices:
        b = eta.branch_sets[hv]
        if not b:
            problems.append(f"branch set of {hv} is empty")
        elif not b <= g.vertex_set:
            problems.append(f"branch set of {hv} leaves the host graph")
        elif not is_connected_within(g.adj, b):
            problems.append(f"branch set of {hv} is not connected")
    if problems:
        return problems
    seen: dict[int, int] = {}
    for hv in h.vertices:
        for x in eta.branch_sets[hv]:
            if x in seen:
                problems.append("branch sets not disjoint")
                return problems
            seen[x] = hv
    used_edges = set()
    for e in h.edges:
        ge = eta.branch_edges.get(e)
        if ge is None:
            problems.append(f"edge {e} of H has no branch edge")
            continue
        ge = tuple(ge)
        if len(ge) != 2 or not g.has_edge(*ge):
            problems.append(f"branch edge {ge} is not an edge of G")
            continue
        ends = {seen.get(ge[0]), seen.get(ge[1])}
        if ends != set(e):
            problems.append(f"branch edge {ge} does not join the branch sets of {e}")
        key = norm_edge(*ge)
        if key in used_edges:
            problems.append("branch edges not distinct")
        used_edges.add(key)
    return problems


def hit_positions(f: Iterable[int], z: Sequence[frozenset[int]]) -> list[int]:
    f = frozenset(f)
    return [i for i, x in enumerate(z) if x and not x.isdisjoint(f)]


def hits_count(f: Iterable[int], z: Iterable[Iterable[int]]) -> int:
    """Number of nonempty multiset members of ``z`` meeting ``f``."""
    return len(hit_positions(f, as_zfamily(z)))


def validate_hzl_model(rg: RootedGraph, h: Graph, ell: int, eta: ModelFunction) -> list[str]:
    problems = validate_model_function(rg.graph, h, eta)
    if not problems and hits_count(eta.image, rg.z) < ell:
        problems.append(f"model meets fewer than {ell} members of Z")
    return problems


def validate_pure_witness(rg: RootedGraph, h: Graph, ell: int, w: PureModelWitness) -> list[str]:
    comps = h.components()
    problems: list[str] = []
    if not w.component_subset or len(set(w.component_subset)) != len(w.component_subset):
        return ["component subset empty or repeated"]
    if any(not 0 <= i < len(comps) for i in w.component_subset):
        return ["component index out of range"]
    if len(w.component_subset) > ell:
        problems.append("more components than l")
    verts: set[int] = set()
    for i in w.component_subset:
        verts |= comps[i]
    sub = h.induced(verts)
    problems += validate_model_function(rg.graph, sub, w.model)
    if problems:
        return problems
    if set(w.alpha) != set(w.component_subset):
        return ["alpha must be defined exactly on the chosen components"]
    used: set[int] = set()
    for i in w.component_subset:
        a = w.alpha[i]
        if not a:
            problems.append(f"alpha({i}) is empty")
        image = set()
        for hv in comps[i]:
            image |= w.model.branch_sets[hv]
        for pos in a:
            if pos in used:
                problems.append("alpha sets not pairwise disjoint")
            used.add(pos)
            if not (0 <= pos < len(rg.z)) or not rg.z[pos] or rg.z[pos].isdisjoint(image):
                problems.append(f"component {i} does not meet its assigned member {pos}")
    if len(used) != ell:
        problems.append(f"alpha covers {len(used)} members, expected {ell}")
    return problems


# --- connected-set enumeration -----------------------------------------------


def connected_sets_from(adj, root: int, allowed: frozenset[int], stop=None, budget: Budget | None = None) -> Iterator[frozenset[int]]:
    """Each connected subset of ``allowed`` containing ``root`` exactly once.

    If ``stop(S)`` is true for a yielded set, its supersets on that branch are
    not explored (used to enumerate only minimal sets with a monotone property).
    """
    if root not in allowed:
        return

    def rec(current: frozenset[int], frontier: list[int], excluded: frozenset[int]):
        if budget is not None:
            budget.tick()
        yield current
        if stop is not None and stop(current):
            return
        for i, v in enumerate(frontier):
            ex = excluded | frozenset(frontier[:i])
            nxt = frontier[i + 1:]
            nset = set(nxt)
            for w in sorted(adj[v]):
                if w in allowed and w not in current and w not in ex and w not in nset and w != v:
                    nxt = nxt + [w]
                    nset.add(w)
            yield from rec(current | {v}, nxt, ex | {v})

    start_frontier = sorted(w for w in adj[root] if w in allowed)
    yield from rec(frozenset([root]), start_frontier, frozenset([root]))


def _minimal_sets_from(adj, root, allowed, prop, budget) -> Iterator[frozenset[int]]:
    for s in connected_sets_from(adj, root, allowed, stop=prop, budget=budget):
        if prop(s):
            yield s


# --- connected pattern hosting -----------------------------------------------


def _pattern_kind(p: Graph) -> str:
    n, m = p.n, p.m
    if m == 0:
        return "edgeless"
    if not p.is_connected():
        return "disconnected"
    if n == 2:
        return "K2"
    if n == 3 and m == 2:
        return "P3"
    degs = [len(p.adj[v]) for v in p.vertices]
    if m == n and all(d == 2 for d in degs) and n in (3, 4):
        return f"C{n}"
    return "generic"


def _pattern_key(p: Graph) -> tuple:
    return (p.n, tuple(sorted(p.edges)))


def _blocks_max(adj, x: frozenset[int]) -> int:
    gx = nx.Graph()
    gx.add_nodes_from(x)
    gx.add_edges_from((u, w) for u in x for w in adj[u] if w in x and u < w)
    return max((len(b) for b in nx.biconnected_components(gx)), default=1)


class _Host:
    """Minor testing of small patterns inside induced subgraphs of one base graph."""

    def __init__(self, base: Graph, budget: Budget):
        self.base = base
        self.adj = base.adj
        self.budget = budget
        self._cache: dict = {}

    def hosts_connected(self, p: Graph, x: frozenset[int]) -> bool:
        """``p`` connected, ``x`` a connected vertex set of the base graph."""
        kind = _pattern_kind(p)
        if len(x) < p.n:
            return False
        if kind == "edgeless":  # single vertex
            return True
        if kind in ("K2", "P3"):
            return True
        key = (_pattern_key(p), x)
        if key in self._cache:
            return self._cache[key]
        edges = sum(1 for u in x for w in self.adj[u] if w in x) // 2
        if edges < p.m or (edges == len(x) - 1 and p.m >= p.n):
            res = False
        elif kind == "C3":
            res = True
        elif kind == "C4":
            res = _blocks_max(self.adj, x) >= 4
        else:
            res = self._generic_model(p, x) is not None
        self._cache[key] = res
        return res

    def hosts(self, p: Graph, x: frozenset[int]) -> bool:
        """``p`` arbitrary, ``x`` connected."""
        if p.n == 0:
            return True
        if p.m == 0:
            return len(x) >= p.n
        comps = components_of(p)
        if len(comps) == 1:
            return self.hosts_connected(comps[0], x)
        key = ("multi", _pattern_key(p), x)
        if key not in self._cache:
            self._cache[key] = self._place_components(comps, x) is not None
        return self._cache[key]

    def _minimal_hosting(self, p: Graph, allowed: frozenset[int], anchor_min: bool = True) -> Iterator[frozenset[int]]:
        """Minimal connected sets inside ``allowed`` that host connected ``p``."""
        for r in sorted(allowed):
            sub = frozenset(v for v in allowed if v >= r) if anchor_min else allowed
            yield from _minimal_sets_from(self.adj, r, sub, lambda s: self.hosts_connected(p, s), self.budget)

    def _place_components(self, comps: list[Graph], x: frozenset[int]) -> list[frozenset[int]] | None:
        # big patterns first; each component gets a disjoint minimal connected host set
        order = sorted(range(len(comps)), key=lambda i: (-comps[i].n, -comps[i].m))
        sizes = [comps[i].n for i in order]
        if sum(sizes) > len(x):
            return None
        placed: list[frozenset[int] | None] = [None] * len(comps)

        def rec(k: int, avail: frozenset[int], prev_key, prev_min) -> bool:
            if k == len(order):
                return True
            if len(avail) < sum(sizes[k:]):
                return False
            i = order[k]
            key = _pattern_key(comps[i])
            for s in self._minimal_hosting(comps[i], avail):
                self.budget.tick()
                # identical consecutive components: impose increasing anchors
                if key == prev_key and min(s) < prev_min:
                    continue
                placed[i] = s
                if rec(k + 1, avail - s, key, min(s)):
                    return True
            placed[i] = None
            return False

        return list(placed) if rec(0, x, None, -1) else None

    def _generic_model(self, p: Graph, x: frozenset[int]) -> dict[int, frozenset[int]] | None:
        """Backtracking over connected branch sets; ``p`` connected."""
        start = max(p.vertices, key=lambda v: (len(p.adj[v]), -v))
        order = [start]
        seen = {start}
        q = deque([start])
        while q:
            u = q.popleft()
            for w in sorted(p.adj[u]):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    q.append(w)
        assign: dict[int, frozenset[int]] = {}
        adj = self.adj

        def touches(a: frozenset[int], b: frozenset[int]) -> bool:
            return any(w in b for u in a for w in adj[u])

        def rec(i: int, free: frozenset[int]) -> bool:
            if i == len(order):
                return True
            pv = order[i]
            nbrs = [q for q in p.adj[pv] if q in assign]
            remaining = len(order) - i - 1
            if nbrs:
                b0 = assign[nbrs[0]]
                starts = sorted({w for u in b0 for w in adj[u] if w in free})
            else:
                starts = sorted(free)
            banned: set[int] = set()
            for r in starts:
                allowed = frozenset(v for v in free if v not in banned)
                for s in connected_sets_from(adj, r, allowed, budget=self.budget):
                    if len(free) - len(s) < remaining:
                        continue
                    if all(touches(s, assign[q]) for q in nbrs):
                        assign[pv] = s
                        if rec(i + 1, free - s):
                            return True
                        del assign[pv]
                banned.add(r)
            return False

        return dict(assign) if rec(0, x) else None

    def model_in(self, p: Graph, x: frozenset[int]) -> dict[int, frozenset[int]] | None:
        """Branch sets of ``p`` (any shape) inside connected ``x``; keys are p's vertex ids."""
        if p.n == 0:
            return {}
        comps_v = p.components()
        comps = components_of(p)
        if len(comps) == 1:
            placed = [x] if self.hosts_connected(comps[0], x) else None
        else:
            placed = self._place_components(comps, x)
        if placed is None:
            return None
        out: dict[int, frozenset[int]] = {}
        for cv, cg, s in zip(comps_v, comps, placed):
            local = self._connected_model(cg, s)
            if local is None:
                return None
            order = sorted(cv)
            for i, b in local.items():
                out[order[i]] = b
        return out

    def _connected_model(self, p: Graph, x: frozenset[int]) -> dict[int, frozenset[int]] | None:
        kind = _pattern_kind(p)
        xs = sorted(x)
        if p.n == 1:
            return {0: frozenset(x)}
        if kind == "K2":
            for u in xs:
                for w in sorted(self.adj[u]):
                    if w in x:
                        return {0: frozenset([u]), 1: frozenset([w])}
            return None
        if kind == "P3":
            for c in xs:
                nb = sorted(w for w in self.adj[c] if w in x)
                if len(nb) >= 2:
                    mid = [v for v in (0, 1, 2) if len(p.adj[v]) == 2][0]
                    ends = [v for v in (0, 1, 2) if v != mid]
                    return {mid: frozenset([c]), ends[0]: frozenset([nb[0]]), ends[1]: frozenset([nb[1]])}
            return None
        if kind in ("C3", "C4"):
            cyc = _long_cycle(self.adj, x, p.n)
            if cyc is None:
                return None
            # walk the pattern cycle and cut the host cycle into arcs
            pc = [0]
            while len(pc) < p.n:
                nxt = [w for w in sorted(p.adj[pc[-1]]) if w not in pc]
                pc.append(nxt[0])
            arcs = _split(cyc, p.n)
            return {pv: frozenset(a) for pv, a in zip(pc, arcs)}
        return self._generic_model(p, x)


def _split(seq: list[int], parts: int) -> list[list[int]]:
    n = len(seq)
    out = []
    base, extra = divmod(n, parts)
    i = 0
    for k in range(parts):
        size = base + (1 if k < extra else 0)
        out.append(seq[i:i + size])
        i += size
    return out


def _long_cycle(adj, x: frozenset[int], k: int) -> list[int] | None:
    """A cycle of length >= k inside x, as a vertex sequence."""
    gx = nx.Graph()
    gx.add_nodes_from(x)
    gx.add_edges_from((u, w) for u in x for w in adj[u] if w in x and u < w)
    for block in sorted(nx.biconnected_components(gx), key=lambda b: (-len(b), min(b))):
        if len(block) < k:
            continue
        sub = gx.subgraph(block)
        for cyc in nx.simple_cycles(sub.to_directed()):
            if len(cyc) >= k:
                return cyc
    return None


def _absorb(adj, parts: dict, region: frozenset[int]) -> dict:
    """Grow disjoint connected ``parts`` (key -> set) to cover the connected ``region``."""
    owner = {}
    for key in sorted(parts, key=repr):
        for v in parts[key]:
            owner[v] = key
    q = deque(sorted(owner))
    while q:
        u = q.popleft()
        for w in sorted(adj[u]):
            if w in region and w not in owner:
                owner[w] = owner[u]
                q.append(w)
    grown: dict = {key: set() for key in parts}
    for v, key in owner.items():
        grown[key].add(v)
    return {k: frozenset(s) for k, s in grown.items()}


def _branch_edges(adj, h: Graph, sets: Mapping[int, frozenset[int]]) -> dict[Edge, Edge]:
    owner = {v: hv for hv, b in sets.items() for v in b}
    out = {}
    for e in sorted(h.edges):
        a, b = e
        best = None
        for u in sorted(sets[a]):
            for w in sorted(adj[u]):
                if owner.get(w) == b:
                    best = norm_edge(u, w)
                    break
            if best:
                break
        out[e] = best
    return out


def is_minor(p: Graph, g: Graph, budget: Budget | int | None = None) -> bool:
    """Whether ``p`` is a minor of ``g`` (exact; exponential fallback)."""
    return find_minor_model(p, g, budget) is not None


def find_minor_model(p: Graph, g: Graph, budget: Budget | int | None = None) -> ModelFunction | None:
    b = _budget(budget)
    host = _Host(g, b)
    comps_g = g.components()
    pcomps_v = p.components()
    pcomps = components_of(p)
    if p.n > g.n or p.m > g.m:
        return None
    # assign pattern components to host components (groups), then place
    t = len(pcomps)
    assignment: list[int] = [-1] * t

    def groups_ok() -> dict[int, list[int]] | None:
        groups: dict[int, list[int]] = {}
        for i, c in enumerate(assignment):
            groups.setdefault(c, []).append(i)
        return groups

    def rec(i: int) -> dict | None:
        if i == t:
            groups = groups_ok()
            sets = {}
            for c, members in groups.items():
                verts = set()
                for j in members:
                    verts |= pcomps_v[j]
                sub = p.induced(verts)
                m = host.model_in(sub, comps_g[c])
                if m is None:
                    return None
                sets.update(m)
            return sets
        for c in range(len(comps_g)):
            b.tick()
            assignment[i] = c
            # cheap per-group size feasibility
            size = sum(pcomps[j].n for j in range(i + 1) if assignment[j] == c)
            if size > len(comps_g[c]):
                continue
            r = rec(i + 1)
            if r is not None:
                return r
        assignment[i] = -1
        return None

    sets = rec(0) if t else {}
    if sets is None:
        return None
    return ModelFunction(sets, _branch_edges(g.adj, p, sets))


# --- (H, Z, l)-model oracle --------------------------------------------------


@dataclass
class _PurePlan:
    # per chosen H-component: (component index, host set X_i, root vertex, matched Z position)
    parts: list[tuple[int, frozenset[int], int, int]]
    used_components: list[frozenset[int]]


class ModelOracle:
    """Existence, minimal supports and realisations for one (G, Z, H, l, pure) setting.

    ``avail`` arguments are vertex subsets of the base graph; the question is
    always asked about the induced rooted subgraph on ``avail``.
    """

    def __init__(self, rg: RootedGraph, h: Graph, ell: int, pure: bool = False, budget: Budget | int | None = None):
        if h.n == 0:
            raise ValueError("pattern H must be non-empty")
        if ell < 1:
            raise ValueError("l must be positive")
        self.rg = rg
        self.g = rg.graph
        self.adj = rg.graph.adj
        self.z: ZFamily = rg.z
        self.h = h
        self.ell = ell
        self.pure = pure and len(h.components()) > 1
        self.budget = _budget(budget)
        self.host = _Host(rg.graph, self.budget)
        self.hcomps_v = h.components()
        self.hcomps = components_of(h)
        self.hkeys = [_pattern_key(c) for c in self.hcomps]
        self.member_of: dict[int, list[int]] = {}
        for i, x in enumerate(self.z):
            for v in x:
                self.member_of.setdefault(v, []).append(i)
        self._group_cache: dict = {}
        self.calls = 0

    # - helpers -
    def mask(self, vs: Iterable[int]) -> int:
        m = 0
        for v in vs:
            for i in self.member_of.get(v, ()):
                m |= 1 << i
        return m

    def _group_pattern(self, comp_idx: Sequence[int]) -> Graph:
        verts: set[int] = set()
        for j in comp_idx:
            verts |= self.hcomps_v[j]
        return self.h.induced(verts)

    def _group_hosted(self, comp_idx: tuple[int, ...], c: frozenset[int]) -> bool:
        key = (tuple(sorted(self.hkeys[j] for j in comp_idx)), c)
        if key not in self._group_cache:
            if len(comp_idx) == 1:
                self._group_cache[key] = self.host.hosts_connected(self.hcomps[comp_idx[0]], c)
            else:
                self._group_cache[key] = self.host.hosts(self._group_pattern(comp_idx), c)
        return self._group_cache[key]

    # - ordinary -
    def _ordinary_plan(self, avail: frozenset[int]) -> tuple[list[frozenset[int]], dict[int, tuple[int, ...]]] | None:
        """Host components and, for each used one, the block of H-components it carries."""
        comps = components_within(self.adj, avail)
        masks = [self.mask(c) for c in comps]
        total = 0
        for m in masks:
            total |= m
        if total.bit_count() < self.ell:
            return None
        t = len(self.hcomps)
        order = sorted(range(len(comps)), key=lambda i: (-masks[i].bit_count(), -len(comps[i]), i))
        if t == 1:
            for i in order:
                self.budget.tick()
                if masks[i].bit_count() >= self.ell and self._group_hosted((0,), comps[i]):
                    return comps, {i: (0,)}
            return None
        plan: dict[int, tuple[int, ...]] = {}

        def rec(remaining: tuple[int, ...], used: frozenset[int], m: int) -> bool:
            self.budget.tick()
            if not remaining:
                return m.bit_count() >= self.ell
            # optimistic bound: remaining blocks can add at most len(remaining) components
            best = m
            extra = [masks[i] for i in order if i not in used][: len(remaining)]
            for e in extra:
                best |= e
            if best.bit_count() < self.ell:
                return False
            first, rest = remaining[0], remaining[1:]
            for r in range(len(rest) + 1):
                for others in itertools.combinations(rest, r):
                    block = (first,) + others
                    left = tuple(x for x in rest if x not in others)
                    tried_empty_sizes = set()
                    for i in order:
                        if i in used:
                            continue
                        if masks[i] == 0:
                            # components meeting no member are interchangeable up to their shape
                            sig = (len(comps[i]),)
                            if sig in tried_empty_sizes:
                                continue
                            tried_empty_sizes.add(sig)
                        if not self._group_hosted(block, comps[i]):
                            continue
                        plan[i] = block
                        if rec(left, used | {i}, m | masks[i]):
                            return True
                        del plan[i]
            return False

        if rec(tuple(range(t)), frozenset(), 0):
            return comps, dict(plan)
        return None

    # - pure -
    def _pure_plan(self, avail: frozenset[int]) -> _PurePlan | None:
        comps = components_within(self.adj, avail)
        masks = [self.mask(c) for c in comps]
        useful = [i for i, m in enumerate(masks) if m]
        total = 0
        for i in useful:
            total |= masks[i]
        if total.bit_count() < self.ell:
            return None
        t_all = len(self.hcomps)
        seen_sel = set()
        for t in range(1, min(self.ell, t_all) + 1):
            for sel in itertools.combinations(range(t_all), t):
                sig = tuple(sorted(self.hkeys[j] for j in sel))
                if sig in seen_sel:
                    continue
                seen_sel.add(sig)
                for assign in itertools.product(useful, repeat=t):
                    self.budget.tick()
                    # identical components: non-decreasing host indices
                    if any(self.hkeys[sel[a]] == self.hkeys[sel[a + 1]] and assign[a] > assign[a + 1] for a in range(t - 1)):
                        continue
                    m = 0
                    for c in set(assign):
                        m |= masks[c]
                    if m.bit_count() < self.ell:
                        continue
                    groups: dict[int, list[int]] = {}
                    for j, c in zip(sel, assign):
                        groups.setdefault(c, []).append(j)
                    if not all(self._group_hosted(tuple(js), comps[c]) for c, js in groups.items()):
                        continue
                    parts = self._place_pure(sel, assign, comps)
                    if parts is not None:
                        return _PurePlan(parts, [comps[c] for c in sorted(set(assign))])
        return None

    def _place_pure(self, sel, assign, comps) -> list[tuple[int, frozenset[int], int, int]] | None:
        if all(self.hcomps[j].n == 1 for j in sel):
            return self._place_points(sel, assign, comps)
        t = len(sel)
        roots: list[int] = [0] * t
        sets: list[frozenset[int]] = [frozenset()] * t
        free = {c: comps[c] for c in set(assign)}

        def rec(a: int) -> list | None:
            if a == t:
                match = self._match_roots(roots)
                if match is None:
                    return None
                return [(sel[i], sets[i], roots[i], match[i]) for i in range(t)]
            c = assign[a]
            pat = self.hcomps[sel[a]]
            cand_roots = sorted(v for v in free[c] if v in self.member_of)
            for r in cand_roots:
                for s in _minimal_sets_from(self.adj, r, free[c], lambda x: self.host.hosts_connected(pat, x), self.budget):
                    roots[a], sets[a] = r, s
                    free[c] = free[c] - s
                    out = rec(a + 1)
                    free[c] = free[c] | s
                    if out is not None:
                        return out
            return None

        return rec(0)

    def _match_roots(self, roots: list[int]) -> list[int] | None:
        """Distinct Z positions z_i with roots[i] in z_i."""
        match_of_pos: dict[int, int] = {}

        def try_assign(i: int, seen: set[int]) -> bool:
            for pos in self.member_of.get(roots[i], ()):
                if pos in seen:
                    continue
                seen.add(pos)
                if pos not in match_of_pos or try_assign(match_of_pos[pos], seen):
                    match_of_pos[pos] = i
                    return True
            return False

        for i in range(len(roots)):
            if not try_assign(i, set()):
                return None
        out = [0] * len(roots)
        for pos, i in match_of_pos.items():
            out[i] = pos
        return out

    def _place_points(self, sel, assign, comps) -> list | None:
        """All chosen components are single vertices: distinct roots with distinct members via flow."""
        net = FlowNetwork()
        s, t_ = ("s",), ("t",)
        for a, c in enumerate(assign):
            net.add_arc(s, ("c", a), 1)
            for v in comps[c]:
                if v in self.member_of:
                    net.add_arc(("c", a), ("vi", v), 1)
        for key in list(net.cap):
            if key[0] == "vi":
                v = key[1]
                net.add_arc(("vi", v), ("vo", v), 1)
                for pos in self.member_of[v]:
                    net.add_arc(("vo", v), ("z", pos), 1)
                    net.add_arc(("z", pos), t_, 1)
        net.cap.setdefault(t_, {})
        self.budget.tick(len(net.cap))
        if net.max_flow(s, t_) < len(sel):
            return None
        parts = []
        for a in range(len(sel)):
            v = next(k[1] for k, f in net.flow[("c", a)].items() if f > 0)
            pos = next(k[1] for k, f in net.flow[("vo", v)].items() if f > 0 and k[0] == "z")
            parts.append((sel[a], frozenset([v]), v, pos))
        return parts

    # - public API -
    def exists(self, avail: Iterable[int] | None = None) -> bool:
        avail = self.g.vertex_set if avail is None else frozenset(avail)
        self.calls += 1
        if multiset_size(x & avail for x in self.z) < self.ell:
            return False
        if self.pure:
            return self._pure_plan(avail) is not None
        return self._ordinary_plan(avail) is not None

    def minimal_support(self, avail: Iterable[int] | None = None) -> frozenset[int] | None:
        """An inclusion-minimal vertex set whose induced rooted subgraph still has a model."""
        avail = self.g.vertex_set if avail is None else frozenset(avail)
        if not self.exists(avail):
            return None
        start = self._plan_support(avail)
        return self.shrink(start)

    def _plan_support(self, avail: frozenset[int]) -> frozenset[int]:
        if self.pure:
            plan = self._pure_plan(avail)
            out: set[int] = set()
            for c in plan.used_components:
                out |= c
            return frozenset(out)
        comps, plan = self._ordinary_plan(avail)
        out = set()
        for i in plan:
            out |= comps[i]
        return frozenset(out)

    def shrink(self, support: frozenset[int]) -> frozenset[int]:
        # far-from-Z vertices go first
        dist = _multi_bfs(self.adj, [v for v in support if v in self.member_of], support)
        order = sorted(support, key=lambda v: (-dist.get(v, 1 << 30), -v))
        chunk = max(1, len(order) // 2)
        while True:
            i = 0
            while i < len(order):
                cand = order[:i] + order[i + chunk:]
                if cand and self.exists(cand):
                    order = cand
                else:
                    i += chunk
            if chunk == 1:
                break
            chunk = max(1, chunk // 2)
        return frozenset(order)

    def realize(self, avail: Iterable[int] | None = None):
        """A model (ordinary) or pure witness living inside ``avail``; ``None`` if none exists."""
        avail = self.g.vertex_set if avail is None else frozenset(avail)
        if not self.exists(avail):
            return None
        if self.pure:
            return self._realize_pure(avail)
        comps, plan = self._ordinary_plan(avail)
        sets: dict[int, frozenset[int]] = {}
        for i, block in plan.items():
            pat = self._group_pattern(block)
            m = self.host.model_in(pat, comps[i])
            sets.update(_absorb(self.adj, m, comps[i]))
        return ModelFunction(sets, _branch_edges(self.adj, self.h, sets))

    def _realize_pure(self, avail: frozenset[int]) -> PureModelWitness:
        plan = self._pure_plan(avail)
        parts = sorted(plan.parts)
        # grow host sets to cover the used components
        grown: dict[int, frozenset[int]] = {}
        for comp in plan.used_components:
            here = {j: x for j, x, _, _ in parts if x <= comp}
            grown.update(_absorb(self.adj, here, comp))
        sets: dict[int, frozenset[int]] = {}
        for j, _, _, _ in parts:
            local = self.host._connected_model(self.hcomps[j], grown[j])
            if local is None:  # pragma: no cover - hosting was checked on a subset
                raise AssertionError("lost a model while absorbing")
            local = _absorb(self.adj, local, grown[j])
            order = sorted(self.hcomps_v[j])
            for i, b in local.items():
                sets[order[i]] = b
        alpha: dict[int, list[int]] = {j: [pos] for j, _, _, pos in parts}
        used = {pos for _, _, _, pos in parts}
        count = len(used)
        for j, _, _, _ in parts:
            if count >= self.ell:
                break
            for pos in hit_positions(grown[j], self.z):
                if count >= self.ell:
                    break
                if pos not in used:
                    used.add(pos)
                    alpha[j].append(pos)
                    count += 1
        sel = tuple(j for j, _, _, _ in parts)
        verts: set[int] = set()
        for j in sel:
            verts |= self.hcomps_v[j]
        sub = self.h.induced(verts)
        model = ModelFunction(sets, _branch_edges(self.adj, sub, sets))
        return PureModelWitness(sel, model, {j: tuple(sorted(a)) for j, a in alpha.items()})


def _multi_bfs(adj, sources, allowed) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    q = deque(sources)
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w in allowed and w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def find_hzl_model(rg: RootedGraph, h: Graph, ell: int, budget: Budget | int | None = None, minimal: bool = True) -> ModelFunction | None:
    """An (H, Z, l)-model of ``rg``, realised on an inclusion-minimal support by default."""
    if ell > rg.size:
        return None
    oracle = ModelOracle(rg, h, ell, pure=False, budget=budget)
    avail = oracle.minimal_support() if minimal else rg.graph.vertex_set
    if avail is None:
        return None
    return oracle.realize(avail)


def find_pure_model(rg: RootedGraph, h: Graph, ell: int, budget: Budget | int | None = None, minimal: bool = True) -> PureModelWitness | None:
    """A pure (H, Z, l)-model witness, realised on an inclusion-minimal support by default."""
    if ell > rg.size:
        return None
    oracle = ModelOracle(rg, h, ell, pure=True, budget=budget)
    avail = oracle.minimal_support() if minimal else rg.graph.vertex_set
    if avail is None:
        return None
    w = oracle.realize(avail)
    if isinstance(w, ModelFunction):
        # connected H: pure models are ordinary models with all of alpha on one component
        pos = hit_positions(w.image, rg.z)[:ell]
        return PureModelWitness((0,), w, {0: tuple(pos)})
    return w
