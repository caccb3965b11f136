"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 violation found, 3 undecided (budget or inconclusive).
Instances are read from stdin (or ``--input``) as canonical JSON.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from . import io as eio
from .counterexample import NegativeInstance, figure1_instance, negative_family, verify_negative
from .duality_engine import EngineConfig, ep_pipeline
from .graph_core import GraphError, RootedGraph, grid_graph
from .linkage import linkage_or_separation
from .minor_model import DEFAULT_BUDGET, BudgetExceeded, ModelFunction, find_hzl_model, find_pure_model
from .pack_cover import check_duality, covering_number, packing_number
from .patterns import parse_pattern
from .rooted_grid import GridModel, Inconclusive, RootedGridModel, rooted_grid_or_separation
from .sweeps import connected_graphs, random_graph, random_zfamily
from .treewidth_ep import TreeDecomposition, bounded_tw_pack_or_hit, heuristic_td, validate_td

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(eio.canonical_dumps(obj))


def _read_instance(args) -> tuple[RootedGraph, dict]:
    text = open(args.input).read() if args.input and args.input != "-" else sys.stdin.read()
    if not text.strip():
        raise UsageError("no instance on input")
    try:
        return eio.loads_instance(text)
    except (ValueError, KeyError, GraphError) as exc:
        raise UsageError(f"bad instance: {exc}") from None


def _grid_model(rg: RootedGraph, meta: dict) -> GridModel | None:
    if "grid_model" in meta:
        gm = meta["grid_model"]
        return GridModel(gm["rows"], gm["cols"], ModelFunction.from_json(gm))
    if "grid" in meta:
        return GridModel.identity(rg.graph)
    return None


def _pattern(spec: str):
    try:
        return parse_pattern(spec)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad pattern {spec!r}: {exc}") from None


# --- subcommands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.kind == "grid":
        try:
            cols = int(args.h) if args.h is not None else args.g
        except ValueError:
            raise UsageError("--h must be an integer for gen grid") from None
        g = grid_graph(args.g, cols)
        z = tuple(frozenset(x) for x in json.loads(args.z)) if args.z else ()
        sys.stdout.write(eio.dumps_instance(RootedGraph(g, z), grid=g.grid_shape))
    elif args.kind == "figure1":
        rg = figure1_instance(args.n)
        sys.stdout.write(eio.dumps_instance(rg, grid=(args.n, args.n)))
    else:
        h = _pattern(args.h or "K1")
        inst = negative_family(h, args.l, args.n, args.x)
        sys.stdout.write(eio.dumps_instance(inst.rooted, provenance=inst.provenance))
    return EXIT_OK


def cmd_find(args) -> int:
    rg, meta = _read_instance(args)
    if args.what in ("model", "pure"):
        h = _pattern(args.pattern)
        fn = find_hzl_model if args.what == "model" else find_pure_model
        w = fn(rg, h, args.l, args.budget)
        _emit({"found": w is not None, "witness": None if w is None else w.to_json()})
        return EXIT_OK
    if args.what == "linkage":
        y = json.loads(args.y) if args.y else []
        res = linkage_or_separation(rg, y, args.k, args.l)
        if hasattr(res, "paths"):
            _emit({"branch": "linkage", **res.to_json()})
        else:
            _emit({"branch": "separation", "a": sorted(res.a_vertices), "b": sorted(res.b_vertices), "order": res.order})
        return EXIT_OK
    m = _grid_model(rg, meta)
    if m is None:
        raise UsageError("rooted-grid search needs a grid (\"grid\" or \"grid_model\" in the instance)")
    res = rooted_grid_or_separation(rg, m, args.order, args.k, args.l, permissive=args.permissive)
    if isinstance(res, RootedGridModel):
        _emit({"branch": "rooted_grid", **res.to_json()})
    else:
        sep = res.separation
        _emit({"branch": "separation", "a": sorted(sep.a_vertices), "b": sorted(sep.b_vertices), "order": sep.order, "grid": res.grid.to_json()})
    return EXIT_OK


def cmd_pack(args) -> int:
    rg, _ = _read_instance(args)
    res = packing_number(rg, _pattern(args.pattern), args.l, args.pure, args.budget)
    if args.json:
        _emit({"nu": res.nu, "supports": [sorted(s) for s in res.supports], "certificate": res.certificate})
    else:
        print(f"nu={res.nu}")
    return EXIT_OK


def cmd_cover(args) -> int:
    rg, _ = _read_instance(args)
    res = covering_number(rg, _pattern(args.pattern), args.l, args.pure, args.budget)
    if args.json:
        _emit({"tau": res.tau, "deletion_set": sorted(res.deletion_set)})
    else:
        print(f"tau={res.tau}")
    return EXIT_OK


def _bound_fn(spec: str):
    if spec == "mader":
        return lambda k: 2 * k - 2
    try:
        c = int(spec)
    except ValueError:
        raise UsageError(f"unknown bound {spec!r} (use 'mader' or an integer)") from None
    return lambda k: c


def cmd_duality(args) -> int:
    h = _pattern(args.pattern)
    bound = _bound_fn(args.bound)
    if args.sweep is None:
        rg, _ = _read_instance(args)
        rep = check_duality(rg, h, args.l, args.k, bound, args.pure, args.budget, exact=True)
        _emit(rep.to_json())
        return {"ok": EXIT_OK, "violation": EXIT_VIOLATION}.get(rep.status, EXIT_UNDECIDED)
    if args.sweep > 7:
        raise UsageError("--sweep covers graphs with at most 7 vertices")
    rnd = random.Random(args.seed)
    checked = violations = undecided = 0
    first = None
    for g in connected_graphs(args.sweep):
        rg = RootedGraph(g, random_zfamily(rnd, g, args.members))
        for k in range(1, args.k + 1):
            rep = check_duality(rg, h, args.l, k, bound, args.pure, args.budget, exact=True)
            checked += 1
            if rep.status == "violation":
                violations += 1
                first = first or {"instance": eio.instance_to_json(rg), "report": rep.to_json()}
            elif rep.status != "ok":
                undecided += 1
    _emit({"checked": checked, "violations": violations, "undecided": undecided, "first_violation": first})
    if violations:
        return EXIT_VIOLATION
    return EXIT_UNDECIDED if undecided else EXIT_OK


def cmd_td(args) -> int:
    rg, _ = _read_instance(args)
    if args.td:
        with open(args.td) as fh:
            td = TreeDecomposition.from_json(json.load(fh))
    else:
        td = heuristic_td(rg.graph)
    if args.what == "validate":
        width, problems = validate_td(rg.graph, td)
        _emit({"valid": not problems, "width": width, "problems": problems})
        return EXIT_OK if not problems else EXIT_VIOLATION
    res = bounded_tw_pack_or_hit(rg, _pattern(args.pattern), args.l, args.k, td, args.pure, args.budget)
    _emit(res.to_json())
    return EXIT_OK


def cmd_pipeline(args) -> int:
    rg, meta = _read_instance(args)
    cfg = EngineConfig(use_paper_constants=args.general_constants, permissive=True, budget=args.budget)
    td = None
    if args.td:
        with open(args.td) as fh:
            td = TreeDecomposition.from_json(json.load(fh))
    try:
        rep = ep_pipeline(rg, _pattern(args.pattern), args.l, args.k, cfg, pure=args.pure, grid=_grid_model(rg, meta), td=td)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(rep.to_json())
    if args.trace:
        for line in rep.trace:
            sys.stderr.write(json.dumps(line, sort_keys=True, default=str) + "\n")
    return EXIT_OK if rep.status == "ok" else EXIT_UNDECIDED


def cmd_verify_negative(args) -> int:
    rg, meta = _read_instance(args)
    h = _pattern(args.pattern)
    prov = meta.get("provenance", {})
    ell = args.l if args.l is not None else prov.get("l")
    x = args.x if args.x is not None else prov.get("x", 0)
    if ell is None:
        raise UsageError("--l missing and no provenance block")
    inst: NegativeInstance | RootedGraph = rg
    if prov and {"t", "l", "n"} <= set(prov):
        regen = negative_family(h, prov["l"], prov["n"], x)
        if regen.rooted == rg:
            inst = regen
    rep = verify_negative(inst, h, ell, x, args.budget, with_tau=args.tau)
    _emit(rep.to_json())
    if rep.notes and (rep.clause_a is None or rep.clause_b is None):
        return EXIT_UNDECIDED
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_export(args) -> int:
    rg, _ = _read_instance(args)
    sys.stdout.write(eio.to_dot(rg))
    return EXIT_OK


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle step cap")
    common.add_argument("--input", "-i", default=None, help="instance file (default: stdin)")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--h", dest="pattern", default="K1", help="pattern: preset like K1, 2K1, P3+K2 or inline JSON")
    model.add_argument("--l", type=int, default=1)
    model.add_argument("--pure", action="store_true")

    p = _Parser(prog="epminor", description="Packing and covering rooted minor models at desk scale")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[common], help="generate instances")
    gen.add_argument("kind", choices=["grid", "figure1", "negative"])
    gen.add_argument("--g", type=int, default=3, help="grid rows")
    gen.add_argument("--h", default=None, help="grid columns (gen grid) or pattern (gen negative)")
    gen.add_argument("--z", default=None, help="Z family as a JSON list of lists")
    gen.add_argument("--n", type=int, default=3)
    gen.add_argument("--l", type=int, default=3)
    gen.add_argument("--x", type=int, default=0)
    gen.set_defaults(func=cmd_gen)

    find = sub.add_parser("find", parents=[common, model], help="search for one object")
    find.add_argument("what", choices=["model", "pure", "linkage", "rooted-grid"])
    find.add_argument("--k", type=int, default=1)
    find.add_argument("--y", default=None, help="target set Y as a JSON list (linkage)")
    find.add_argument("--order", type=int, default=1, help="order of the rooted grid")
    find.add_argument("--permissive", action="store_true", help="allow grids below the proven size")
    find.set_defaults(func=cmd_find)

    for name, fn, text in (
        ("pack", cmd_pack, "maximum number of disjoint models"),
        ("cover", cmd_cover, "minimum deletion set"),
    ):
        sp = sub.add_parser(name, parents=[common, model], help=text)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=fn)

    dc = sub.add_parser("duality-check", parents=[common, model], help="check k disjoint models or a bounded deletion set")
    dc.add_argument("--k", type=int, default=2)
    dc.add_argument("--bound", default="mader")
    dc.add_argument("--sweep", type=int, default=None, help="sweep all connected graphs up to this order")
    dc.add_argument("--members", type=int, default=4, help="largest Z size in sweeps")
    dc.set_defaults(func=cmd_duality)

    td = sub.add_parser("td", parents=[common, model], help="tree decompositions")
    td.add_argument("what", choices=["validate", "pack-or-hit"])
    td.add_argument("--td", default=None, help="decomposition JSON file (default: min-degree heuristic)")
    td.add_argument("--k", type=int, default=2)
    td.set_defaults(func=cmd_td)

    pl = sub.add_parser("pipeline", parents=[common, model], help="packing or deletion set, certified")
    pl.add_argument("--k", type=int, default=2)
    pl.add_argument("--td", default=None)
    pl.add_argument("--general-constants", action="store_true")
    pl.add_argument("--trace", action="store_true", help="branch log as JSON lines on stderr")
    pl.set_defaults(func=cmd_pipeline)

    vn = sub.add_parser("verify-negative", parents=[common], help="check the negative-family clauses")
    vn.add_argument("--h", dest="pattern", default="K1")
    vn.add_argument("--l", type=int, default=None)
    vn.add_argument("--x", type=int, default=None)
    vn.add_argument("--tau", action="store_true", help="also compute the covering number")
    vn.set_defaults(func=cmd_verify_negative)

    ex = sub.add_parser("export", parents=[common], help="export formats")
    ex.add_argument("fmt", choices=["dot"])
    ex.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, Inconclusive) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (ValueError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
