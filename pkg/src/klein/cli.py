"""Command-line front end: ``klein check|hh|graph|surf``.

Exit codes: 0 pass, 1 fail, 2 error (usage, parse or runtime error).
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import Optional, Sequence

from . import graphs, hochschild, surfcat
from .ainfty import check_ainfty_relations, check_calabi_yau, check_involution_compatibility, from_dg
from .fileio import ParseError, load_category, load_graph, load_word
from .invcat import check_dg_axioms, check_involution_axioms

PASS, FAIL, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(name: str, minimum: int):
    def conv(x):
        try:
            v = int(x)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be at least {minimum}")
        return v
    return conv


def _status(out, ok: bool) -> int:
    out.write(("status: pass" if ok else "status: fail") + "\n")
    return PASS if ok else FAIL


# commands -------------------------------------------------------------------------

def cmd_check(args, out) -> int:
    c, cy = load_category(args.category)
    reports = [check_dg_axioms(c), check_involution_axioms(c)]
    if all(r.ok for r in reports):
        a = from_dg(c, args.nmax)
        reports += [check_ainfty_relations(a), check_involution_compatibility(a)]
        if cy is not None:
            reports.append(check_calabi_yau(a, cy))
    for r in reports:
        if args.format == "rows":
            if r.ok:
                out.write(f"{r.name},pass,,\n")
            for v in r.violations:
                out.write(f"{r.name},fail,{v.kind},\"{', '.join(map(str, v.witness))}\"\n")
        else:
            out.write(str(r) + "\n")
    if cy is None:
        out.write("calabi_yau,skipped,,\n" if args.format == "rows" else "calabi_yau: skipped (no trace)\n")
    return _status(out, all(r.ok for r in reports))


def cmd_hh(args, out) -> int:
    c, _ = load_category(args.category)
    bad = [r for r in (check_dg_axioms(c), check_involution_axioms(c)) if not r.ok]
    if bad:
        for r in bad:
            out.write(str(r) + "\n")
        return _status(out, False)
    variants = list(hochschild.BUILDERS) if args.variant == "all" else [args.variant]
    tables = {}
    for v in variants:
        cx = hochschild.BUILDERS[v](c, args.trunc)
        tables[v] = hochschild.homology(cx)
    out.write(hochschild.format_report(tables, args.format) + "\n")
    if args.variant == "all" and args.format == "text":
        same = all(tables[v][k].dim == tables[variants[0]][k].dim
                   for v in variants for k in tables[variants[0]] if k in tables[v])
        out.write("comparison: " + ("all variants agree" if same else "variants differ") + "\n")
    return PASS


def cmd_graph(args, out) -> int:
    sub = args.sub
    if sub == "moduli":
        ok = graphs.is_moduli_nonempty(args.g, args.u, args.h, args.n)
        out.write(("nonempty" if ok else "empty") + "\n")
        return PASS
    if sub == "iso":
        ok, iso = graphs.is_isomorphic(load_graph(args.graph), load_graph(args.other))
        out.write(("isomorphic" if ok else "not isomorphic") + "\n")
        if ok and args.format == "text":
            out.write(f"vertices: {dict(iso.vertices)}\n")
        return PASS
    g = load_graph(args.graph)
    if sub == "contract":
        out.write(repr(graphs.contract_edge(g, args.half_edge)) + "\n")
    elif sub == "reduce":
        out.write(repr(graphs.reduce(g, random.Random(args.seed))) + "\n")
    elif sub == "type":
        t = graphs.thicken_type(g)
        out.write(f"({t.g},{t.u},{t.h})\n")
    return PASS


def cmd_surf(args, out) -> int:
    sub = args.sub
    if sub == "closed-vs-hh":
        c, _ = load_category(args.category)
        cs = surfcat.closed_state_complex(c, args.trunc)
        hh = hochschild.build_normalized_involutive(c, args.trunc)
        res = surfcat.compare_with_hochschild(cs, hh)
        if args.format == "rows":
            out.write("degree,closed_dim,hochschild_dim\n")
            for k in sorted(set(res["dims"]) | set(res["hochschild_dims"])):
                out.write(f"{k},{res['dims'].get(k, 0)},{res['hochschild_dims'].get(k, 0)}\n")
        else:
            out.write(f"closed-state dims: {res['dims']}\n")
            out.write(f"hochschild dims:   {res['hochschild_dims']}\n")
        ok = res["iso"] and res["commutes"] and res["dims"] == res["hochschild_dims"]
        out.write(("EQUAL (dims and differentials)" if ok else "DIFFERENT") + "\n")
        return PASS if ok else FAIL
    w = load_word(args.word)
    if sub == "normalize":
        out.write(_show(surfcat.normalize(w)) + "\n")
    elif sub == "diff":
        out.write(_show(surfcat.differential(w)) + "\n")
    elif sub == "evaluate":
        c, cy = load_category(args.category)
        a = from_dg(c, args.nmax)
        m = surfcat.evaluate(w, a, cy)
        out.write(f"matrix {m.rows}x{m.cols}\n")
        for (i, j), v in sorted(m.entries.items()):
            if args.format == "rows":
                out.write(f"{i},{j},{v}\n")
            else:
                out.write(f"  [{i},{j}] = {v}\n")
    return PASS


def _show(w: surfcat.MorphismWord) -> str:
    if w.is_zero():
        return "0"
    if len(w.terms) == 1:
        (d, v), = w.terms.items()
        if v == 1 and not d.boxes and str(d) == "Id":
            return "Identity"
    return str(w)


# parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="klein", description="Klein TCFT workbench")
    common = _Parser(add_help=False)
    common.add_argument("--trunc", type=_positive("trunc", 1), default=4)
    common.add_argument("--nmax", type=_positive("nmax", 2), default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["text", "rows"], default="text")
    sp = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sp.add_parser("check", parents=[common], help="verify the axiom suites of a category file")
    c.add_argument("category")

    h = sp.add_parser("hh", parents=[common], help="Hochschild homology tables")
    h.add_argument("category")
    h.add_argument("--variant", choices=["ordinary", "involutive", "normalized", "all"], default="all")

    g = sp.add_parser("graph", help="Möbius graph operations")
    gs = g.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    x = gs.add_parser("contract", parents=[common])
    x.add_argument("graph")
    x.add_argument("half_edge", type=int)
    x = gs.add_parser("reduce", parents=[common])
    x.add_argument("graph")
    x = gs.add_parser("iso", parents=[common])
    x.add_argument("graph")
    x.add_argument("other")
    x = gs.add_parser("type", parents=[common])
    x.add_argument("graph")
    x = gs.add_parser("moduli", parents=[common])
    for nm in ("g", "u", "h", "n"):
        x.add_argument(nm, type=_positive(nm, 0))

    s = sp.add_parser("surf", help="surface category words")
    ss = s.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for nm in ("normalize", "diff"):
        x = ss.add_parser(nm, parents=[common])
        x.add_argument("word")
    x = ss.add_parser("evaluate", parents=[common])
    x.add_argument("word")
    x.add_argument("category")
    x = ss.add_parser("closed-vs-hh", parents=[common])
    x.add_argument("category")
    return p


COMMANDS = {"check": cmd_check, "hh": cmd_hh, "graph": cmd_graph, "surf": cmd_surf}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
    except (graphs.GraphError, surfcat.SurfaceError, surfcat.NonTermination,
            hochschild.DescentFailure, ValueError, KeyError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
