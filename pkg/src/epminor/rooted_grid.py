"""Grid models: restriction under vertex deletion, the rooted-grid-or-separation
search, and extraction of disjoint rooted models from a large rooted grid."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph_core import Graph, RootedGraph, Separation, as_zfamily, disjoint_union, grid_graph, norm_edge
from .linkage import Linkage, ZkPartition, linkage_or_separation, refine_partition, validate_linkage_separation, validate_zk_partition
from .minor_model import ModelFunction, validate_model_function

Cell = tuple[int, int]


class Inconclusive(RuntimeError):
    """The search ran below the proven size bound and could not finish."""


@dataclass(frozen=True)
class GridModel:
    rows: int
    cols: int
    eta: ModelFunction

    @classmethod
    def identity(cls, g: Graph) -> GridModel:
        rows, cols = g.grid_shape
        cell = {_cell_id(cols, *g.coords[v]): v for v in g.vertices}
        bs = {c: frozenset([v]) for c, v in cell.items()}
        be = {e: norm_edge(cell[e[0]], cell[e[1]]) for e in grid_graph(rows, cols).edges}
        return cls(rows, cols, ModelFunction(bs, be))

    @property
    def order(self) -> int:
        return min(self.rows, self.cols)

    def branch(self, r: int, c: int) -> frozenset[int]:
        return self.eta.branch_sets[_cell_id(self.cols, r, c)]

    def row_image(self, r: int) -> frozenset[int]:
        return frozenset().union(*(self.branch(r, c) for c in range(1, self.cols + 1)))

    def col_image(self, c: int) -> frozenset[int]:
        return frozenset().union(*(self.branch(r, c) for r in range(1, self.rows + 1)))

    def cell_of(self) -> dict[int, Cell]:
        return {v: (r, c) for r in range(1, self.rows + 1) for c in range(1, self.cols + 1) for v in self.branch(r, c)}

    @property
    def image(self) -> frozenset[int]:
        return self.eta.image

    def pattern(self) -> Graph:
        return grid_graph(self.rows, self.cols)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, **self.eta.to_json()}


def _cell_id(cols: int, r: int, c: int) -> int:
    return (r - 1) * cols + (c - 1)


def validate_grid_model(g: Graph, m: GridModel) -> list[str]:
    return validate_model_function(g, m.pattern(), m.eta)


def _derive(m: GridModel, groups: Mapping[Cell, Iterable[Cell]], rows: int, cols: int, extra: Mapping[Cell, Iterable[int]] | None = None) -> GridModel:
    """New grid model whose cell (r, c) is the union of the old cells in ``groups[(r, c)]``.

    Branch edges are inherited from the old model: any old grid edge between two groups works.
    """
    owner: dict[Cell, Cell] = {}
    bs: dict[int, frozenset[int]] = {}
    for cell, olds in groups.items():
        olds = list(olds)
        for o in olds:
            owner[o] = cell
        s = frozenset().union(*(m.branch(*o) for o in olds))
        if extra and cell in extra:
            s |= frozenset(extra[cell])
        bs[_cell_id(cols, *cell)] = s
    be = {}
    for (r, c), olds in groups.items():
        for dr, dc in ((1, 0), (0, 1)):
            tgt = (r + dr, c + dc)
            if tgt[0] > rows or tgt[1] > cols:
                continue
            found = None
            for o in sorted(olds):
                for nb in ((o[0] + 1, o[1]), (o[0] - 1, o[1]), (o[0], o[1] + 1), (o[0], o[1] - 1)):
                    if owner.get(nb) == tgt:
                        key = norm_edge(_cell_id(m.cols, *o), _cell_id(m.cols, *nb))
                        found = m.eta.branch_edges[key]
                        break
                if found:
                    break
            if found is None:
                raise AssertionError(f"no inherited edge between cells {(r, c)} and {tgt}")
            be[norm_edge(_cell_id(cols, r, c), _cell_id(cols, *tgt))] = found
    return GridModel(rows, cols, ModelFunction(bs, be))


def restrict_grid_model(m: GridModel, s: Iterable[int]) -> GridModel:
    """A grid model of order n - |S| inside ``m`` avoiding S, containing every row and column
    of ``m`` that S does not touch.

    Each surviving cell takes the column segment above it and the row segment to its
    left back to the previous surviving row/column (the last ones extend to the border);
    trailing rows and columns are then merged to reach the target order.
    """
    s = frozenset(s)
    k = len(s)
    if k >= min(m.rows, m.cols):
        raise ValueError(f"|S| = {k} must be smaller than the grid order {min(m.rows, m.cols)}")
    rows = [r for r in range(1, m.rows + 1) if m.row_image(r).isdisjoint(s)]
    cols = [c for c in range(1, m.cols + 1) if m.col_image(c).isdisjoint(s)]
    a, b = len(rows), len(cols)
    groups: dict[Cell, list[Cell]] = {}
    for x in range(a):
        lo_r = rows[x - 1] if x else 0
        hi_r = rows[x] if x < a - 1 else m.rows
        for y in range(b):
            lo_c = cols[y - 1] if y else 0
            hi_c = cols[y] if y < b - 1 else m.cols
            cells = {(xr, cols[y]) for xr in range(lo_r + 1, hi_r + 1)}
            cells |= {(rows[x], yc) for yc in range(lo_c + 1, hi_c + 1)}
            groups[(x + 1, y + 1)] = sorted(cells)
    ab = _derive(m, groups, a, b)
    tr, tc = m.rows - k, m.cols - k
    merged: dict[Cell, list[Cell]] = {}
    for (x, y) in groups:
        merged.setdefault((min(x, tr), min(y, tc)), []).append((x, y))
    return _derive(ab, merged, tr, tc)


# --- rooted grid models ------------------------------------------------------


@dataclass(frozen=True)
class RootedGridModel:
    grid: GridModel
    # roots[i] lies in the branch set of v_{1, i+1}
    roots: tuple[int, ...]
    partition: ZkPartition

    @property
    def order(self) -> int:
        return self.grid.order

    def to_json(self) -> dict:
        return {**self.grid.to_json(), "roots": list(self.roots), "partition": self.partition.to_json()}


def validate_rooted_grid_model(rg: RootedGraph, m: RootedGridModel, k: int, ell: int) -> list[str]:
    problems = validate_grid_model(rg.graph, m.grid)
    if problems:
        return problems
    if m.grid.rows != m.grid.cols:
        problems.append("grid model is not square")
    if m.order < k * ell:
        problems.append(f"order {m.order} below kl = {k * ell}")
    if len(m.roots) != k * ell:
        problems.append(f"expected {k * ell} roots, got {len(m.roots)}")
    for i, w in enumerate(m.roots):
        if i < m.grid.cols and w not in m.grid.branch(1, i + 1):
            problems.append(f"root {w} not in the first-row branch set {i + 1}")
    problems += validate_zk_partition(list(m.roots), rg.z, k, m.partition)
    return problems


@dataclass(frozen=True)
class GridSeparation:
    separation: Separation
    # grid model of order n - |V(A ∩ B)| inside B - V(A)
    grid: GridModel


def validate_grid_separation(rg: RootedGraph, n: int, k: int, ell: int, gs: GridSeparation) -> list[str]:
    problems = validate_linkage_separation(rg, (), k, ell, gs.separation)
    problems += validate_grid_model(rg.graph, gs.grid)
    if gs.grid.order != n - gs.separation.order:
        problems.append(f"surviving grid has order {gs.grid.order}, expected {n - gs.separation.order}")
    if not gs.grid.image <= gs.separation.b_only:
        problems.append("surviving grid not inside B - V(A)")
    return problems


def _shorten(paths: list[list[int]], col_of: Mapping[int, int], used: set[int]) -> list[list[int]]:
    """Cut paths back so that every path meets no free column except at its own last vertex."""
    paths = [list(p) for p in paths]
    changed = True
    while changed:
        changed = False
        for idx, p in enumerate(paths):
            others = {col_of.get(q[-1]) for j, q in enumerate(paths) if j != idx}
            for pos in range(len(p) - 1):
                c = col_of.get(p[pos])
                if c is not None and c not in used and c not in others:
                    paths[idx] = p[: pos + 1]
                    changed = True
                    break
    return paths


def rooted_grid_or_separation(rg: RootedGraph, m: GridModel, g: int, k: int, ell: int, permissive: bool = False) -> GridSeparation | RootedGridModel:
    """Either a separation of order < k(l - ||Z \\ A||) keeping a large grid on the B side,
    or a (Z, k, l)-rooted grid model of order g.

    Raises ValueError below the proven size bound unless ``permissive``, in which case
    :class:`Inconclusive` signals that the search could not complete.
    """
    n = m.order
    kl = k * ell
    if m.rows != m.cols:
        raise ValueError("grid model must be square")
    if g < kl:
        raise ValueError(f"need g >= kl = {kl}")
    if not permissive and n < g * (kl * kl + 1) + kl:
        raise ValueError(f"grid order {n} below the bound g(k^2 l^2 + 1) + kl = {g * (kl * kl + 1) + kl}")
    if n < kl * kl or n < kl + g or n < 2 * kl:
        raise Inconclusive(f"grid order {n} too small for the column sequence")
    graph = rg.graph
    col_of = {v: c for v, (_, c) in m.cell_of().items()}
    used: set[int] = set()
    for _ in range(kl):
        free = [c for c in range(1, n + 1) if c not in used][:kl]
        tops = [min(m.branch(1, c)) for c in free]
        res = linkage_or_separation(rg, tops, k, ell)
        if isinstance(res, Separation):
            rest = restrict_grid_model(m, res.separator)
            return GridSeparation(res, rest)
        paths = _shorten([list(p) for p in res.paths], col_of, used)
        used |= {col_of[p[-1]] for p in paths}
    # a window of g consecutive columns avoiding every marked column
    p = next((q for q in range(kl, n - g + 1) if all(q + i not in used for i in range(1, g + 1))), None)
    if p is None:
        raise Inconclusive("no window of unmarked columns")
    contracted = {i: m.branch(i, p + 1) for i in range(kl + 1, 2 * kl + 1)}
    d = frozenset().union(*(m.branch(i, p + j) for i in range(kl + 1, n + 1) for j in range(1, g + 1)))
    keep = graph.vertex_set - d
    base = max(graph.vertices) + 1
    w_of = {i: base + i - kl - 1 for i in contracted}
    owner = {v: w_of[i] for i, s in contracted.items() for v in s}
    alive = keep | set(w_of.values())
    edges = set()
    for u, v in graph.edges:
        uu, vv = owner.get(u, u), owner.get(v, v)
        if uu in alive and vv in alive and uu != vv:
            edges.add(norm_edge(uu, vv))
    g2 = Graph.from_edges(sorted(keep) + sorted(w_of.values()), edges)
    z2 = tuple(frozenset(zz & keep) for zz in rg.z)
    res = linkage_or_separation(RootedGraph(g2, z2), w_of.values(), k, ell)
    if isinstance(res, Separation):
        if permissive:
            raise Inconclusive("contracted graph separates the roots below the proven size")
        raise AssertionError("contracted graph unexpectedly separates the roots")  # pragma: no cover
    attach: dict[int, list[int]] = {}
    row_of_w = {w: i - kl for i, w in w_of.items()}
    for path in res.paths:
        attach[row_of_w[path[-1]]] = list(path[:-1])
    # transpose so that the attached paths sit on the first row
    groups = {(a, b): [(kl + b, p + a)] for a in range(1, g + 1) for b in range(1, g + 1)}
    extra = {(1, i): attach[i] for i in attach}
    grid = _derive(m, groups, g, g, extra)
    roots = tuple(attach[i][0] for i in range(1, kl + 1))
    cls = res.partition
    partition = ZkPartition(cls.classes, cls.gamma, k)
    return RootedGridModel(grid, roots, partition)


# --- disjoint models from a rooted grid ------------------------------------------


class Variant(enum.Enum):
    FULL = "full"
    REDUCED = "reduced"


def copies_of_grid(c: int, h: int) -> Graph:
    """c disjoint copies of the h x h grid; copy t uses ids t*h*h + (x-1)*h + (y-1)."""
    return disjoint_union([grid_graph(h, h)] * c).graph


def required_order(k: int, ell: int, h: int) -> int:
    return k * ell * (h + 2) + 1


def _q_cells(kl: int, h: int, q: int) -> tuple[list[Cell], dict[Cell, Cell]]:
    """Tail cells of the q-th path-plus-subgrid and the block cell map (x, y) -> grid cell."""
    tail = [(a, q) for a in range(1, kl + 3 - q)]
    tail += [(kl + 2 - q, b) for b in range(q, kl + 2 + h * (q - 1))]
    tail += [(a, kl + 1 + h * (q - 1)) for a in range(kl + 2 - q, kl + 3)]
    block = {(x, y): (kl + 1 + x, kl + h * (q - 1) + y) for x in range(1, h + 1) for y in range(1, h + 1)}
    return list(dict.fromkeys(tail)), block


def detour_cells(kl: int, h: int, a: int, b: int, level: int) -> list[Cell]:
    """The connecting route between the a-th and b-th subgrids (1-based), ``level`` rows below them."""
    top = kl + 1 + h
    ca, cb = kl + 1 + h * (a - 1), kl + 1 + h * (b - 1)
    cells = [(r, ca) for r in range(top, top + level + 1)]
    cells += [(top + level, c) for c in range(ca, cb + 1)]
    cells += [(r, cb) for r in range(top + level, top - 1, -1)]
    return list(dict.fromkeys(cells))


def models_from_rooted_grid(rg: RootedGraph, m: RootedGridModel, h: int, variant: Variant = Variant.FULL) -> tuple[Graph, list[ModelFunction]]:
    """k pairwise disjoint models of l copies of G_h (FULL) or l - 1 copies (REDUCED), each
    meeting l members of Z through its roots. Returns the pattern graph and the models."""
    k = m.partition.k
    kl = len(m.roots)
    ell = kl // k
    if ell * k != kl:
        raise ValueError("number of roots is not a multiple of k")
    if m.order < required_order(k, ell, h):
        raise ValueError(f"rooted grid order {m.order} below kl(h+2)+1 = {required_order(k, ell, h)}")
    if variant is Variant.REDUCED and ell < 2:
        raise ValueError("the reduced variant needs l >= 2")
    rp = refine_partition(list(m.roots), rg.z, k, ell, m.partition)
    grid = m.grid
    hh = h * h
    copies = ell if variant is Variant.FULL else ell - 1
    pattern = copies_of_grid(copies, h)
    out = []
    for j, cls in enumerate(rp.index_classes):
        idx = list(cls)
        extra_cells: dict[Cell, list[Cell]] = {}
        if variant is Variant.REDUCED:
            a, b = rp.anchors[j]
            idx.remove(b)
            tail_b, block_b = _q_cells(kl, h, b + 1)
            route = detour_cells(kl, h, a + 1, b + 1, j + 1)
            extra_cells[(a, h, 1)] = route + tail_b + list(block_b.values())
        bs: dict[int, frozenset[int]] = {}
        for t, q0 in enumerate(idx):
            tail, block = _q_cells(kl, h, q0 + 1)
            for (x, y), cell in block.items():
                cells = [cell]
                if (x, y) == (1, 1):
                    cells += tail
                cells += extra_cells.get((q0, x, y), [])
                pv = t * hh + (x - 1) * h + (y - 1)
                bs[pv] = frozenset().union(*(grid.branch(*c) for c in set(cells)))
        be = {}
        for e in pattern.edges:
            u, v = e
            tu, xu, yu = u // hh, (u % hh) // h + 1, u % h + 1
            tv, xv, yv = v // hh, (v % hh) // h + 1, v % h + 1
            q_u = idx[tu] + 1
            cu = (kl + 1 + xu, kl + h * (q_u - 1) + yu)
            cv = (kl + 1 + xv, kl + h * (q_u - 1) + yv)
            be[e] = grid.eta.branch_edges[norm_edge(_cell_id(grid.cols, *cu), _cell_id(grid.cols, *cv))]
        out.append(ModelFunction(bs, be))
    return pattern, out


def planted_rooted_grid(n: int, k: int, ell: int, classes: Sequence[Sequence[int]], extra_z: Sequence[Iterable[int]] = ()) -> tuple[RootedGraph, RootedGridModel]:
    """The n x n grid with roots on the first kl vertices of row 1; ``classes`` lists, per Z
    member, the 0-based root indices it receives (each of size <= k). ``extra_z`` adds
    further vertices to the members position-wise."""
    g = grid_graph(n, n)
    kl = k * ell
    roots = tuple(g.grid_vertex(1, i) for i in range(1, kl + 1))
    z = []
    for pos, cl in enumerate(classes):
        members = {roots[i] for i in cl}
        if pos < len(extra_z):
            members |= set(extra_z[pos])
        z.append(frozenset(members))
    z = as_zfamily(z)
    nonempty = [(tuple(roots[i] for i in cl), pos) for pos, cl in enumerate(classes) if cl]
    part = ZkPartition(tuple(c for c, _ in nonempty), tuple(p for _, p in nonempty), k)
    return RootedGraph(g, z), RootedGridModel(GridModel.identity(g), roots, part)
