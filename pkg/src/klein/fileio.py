"""JSON file formats for categories, graphs and surface words.

All files carry ``format_version`` (currently 1).  Rationals are written as
strings ``"p/q"`` (integers may be plain numbers).  Basis elements are referred
to by name inside their hom space.

Category file::

    {"format_version": 1,
     "branes": ["a"],
     "homs": [{"source": "a", "target": "a", "basis": [["1", 0], ["x", 0]]}],
     "compose": [{"path": ["a", "a", "a"], "left": "x", "right": "x", "value": {"1": "1"}}],
     "units": {"a": {"1": "1"}},
     "differential": [{"source": "a", "target": "a", "element": "e", "value": {"x": "1"}}],
     "star": [{"source": "a", "target": "a", "element": "x", "value": {"x": "-1"}}],
     "trace": {"a": {"1": "1"}}, "cy_degree": 0}

``compose`` entries give ``right∘left`` for ``left ∈ Hom(p0, p1)`` and
``right ∈ Hom(p1, p2)``.  Missing ``star`` entries mean the basis element is
fixed; ``trace`` is optional.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from .ainfty import CalabiYauData
from .exactlin import SparseMatrix
from .graphs import GraphError, MobiusGraph
from .invcat import InvolutiveCategory, ShapeMismatch

FORMAT_VERSION = 1
DATA_DIR = Path(__file__).parent / "data"


class ParseError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def rational(x, where: str = "value") -> Fraction:
    if isinstance(x, bool):
        raise ParseError(where, "booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(where, f"expected a rational string 'p/q', got {x!r}")


def fmt_rational(x: Fraction) -> str:
    return str(Fraction(x))


def read_json(source: Union[str, Path, Mapping]) -> Dict[str, Any]:
    if isinstance(source, Mapping):
        data = dict(source)
        where = "<data>"
    else:
        p = Path(source)
        if not p.exists() and (DATA_DIR / p).exists():
            p = DATA_DIR / p
        where = str(p)
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise ParseError(f"{where}:{e.lineno}:{e.colno}", e.msg) from None
        except OSError as e:
            raise ParseError(where, str(e)) from None
    if not isinstance(data, dict):
        raise ParseError(where, "top level must be an object")
    v = data.get("format_version")
    if v != FORMAT_VERSION:
        raise ParseError(f"{where}: format_version", f"unsupported version {v!r}")
    return data


# categories ----------------------------------------------------------------------

def _vector(names: Dict[str, int], raw, where: str) -> Dict[int, Fraction]:
    if not isinstance(raw, Mapping):
        raise ParseError(where, "expected an object of name → rational")
    out = {}
    for k, v in raw.items():
        if k not in names:
            raise ParseError(f"{where}.{k}", "unknown basis element")
        out[names[k]] = rational(v, f"{where}.{k}")
    return out


def load_category(source) -> Tuple[InvolutiveCategory, Optional[CalabiYauData]]:
    data = read_json(source)
    try:
        branes = [str(b) for b in data["branes"]]
        homs: Dict[Tuple[str, str], list] = {}
        for n, h in enumerate(data.get("homs", [])):
            where = f"homs[{n}]"
            key = (str(h["source"]), str(h["target"]))
            if key[0] not in branes or key[1] not in branes:
                raise ParseError(where, f"unknown brane in {key}")
            homs[key] = [(str(nm), int(dg)) for nm, dg in h["basis"]]
        index = {k: {nm: i for i, (nm, _) in enumerate(v)} for k, v in homs.items()}

        def names(a, b, where):
            return index.get((a, b), {})

        def elt(a, b, nm, where):
            ix = names(a, b, where)
            if nm not in ix:
                raise ParseError(where, f"no basis element {nm!r} in Hom({a},{b})")
            return ix[nm]

        compose: Dict[Tuple[str, str, str], Dict] = {}
        for n, e in enumerate(data.get("compose", [])):
            where = f"compose[{n}]"
            a, b, c = (str(x) for x in e["path"])
            i = elt(a, b, e["left"], f"{where}.left")
            j = elt(b, c, e["right"], f"{where}.right")
            compose.setdefault((a, b, c), {})[(i, j)] = _vector(names(a, c, where), e["value"], f"{where}.value")
        units = {}
        for a in branes:
            if a not in data.get("units", {}):
                raise ParseError("units", f"missing unit for brane {a}")
            units[a] = _vector(names(a, a, "units"), data["units"][a], f"units.{a}")
        diff: Dict[Tuple[str, str], Dict[int, Dict[int, Fraction]]] = {}
        for n, e in enumerate(data.get("differential", [])):
            where = f"differential[{n}]"
            a, b = str(e["source"]), str(e["target"])
            diff.setdefault((a, b), {})[elt(a, b, e["element"], where)] = \
                _vector(names(a, b, where), e["value"], f"{where}.value")
        star_cols: Dict[Tuple[str, str], Dict[int, Dict[int, Fraction]]] = {}
        for n, e in enumerate(data.get("star", [])):
            where = f"star[{n}]"
            a, b = str(e["source"]), str(e["target"])
            star_cols.setdefault((a, b), {})[elt(a, b, e["element"], where)] = \
                _vector(names(b, a, where), e["value"], f"{where}.value")
        dmats, smats = {}, {}
        for a in branes:
            for b in branes:
                n = len(homs.get((a, b), []))
                cols = diff.get((a, b), {})
                dmats[(a, b)] = SparseMatrix.from_columns(n, [cols.get(k, {}) for k in range(n)]) \
                    if n else SparseMatrix.zero(0, 0)
                sc = star_cols.get((a, b), {})
                m = len(homs.get((b, a), []))
                if (a, b) != (b, a) and n and not sc:
                    raise ParseError("star", f"Hom({a},{b}) needs explicit star values")
                smats[(a, b)] = SparseMatrix.from_columns(m, [sc.get(k, {k: Fraction(1)}) for k in range(n)]) \
                    if n else SparseMatrix.zero(m, 0)
        cat = InvolutiveCategory(branes, homs, compose, units, diff=dmats, star=smats)
        cy = None
        if "trace" in data:
            tr = {a: _vector(names(a, a, "trace"), v, f"trace.{a}") for a, v in data["trace"].items()}
            cy = CalabiYauData(tr, int(data.get("cy_degree", 0)))
        return cat, cy
    except ParseError:
        raise
    except KeyError as e:
        raise ParseError("category", f"missing field {e}") from None
    except (TypeError, ValueError, ShapeMismatch) as e:
        raise ParseError("category", str(e)) from None


def dump_category(c: InvolutiveCategory, cy: Optional[CalabiYauData] = None) -> Dict[str, Any]:
    def vec(a, b, v):
        nm = c.names(a, b)
        return {nm[k]: fmt_rational(x) for k, x in sorted(v.items()) if x}

    out: Dict[str, Any] = {"format_version": FORMAT_VERSION, "branes": list(c.branes)}
    out["homs"] = [{"source": a, "target": b, "basis": [[n, d] for n, d in c.homs[(a, b)]]}
                   for a, b in c.pairs() if c.dim(a, b)]
    out["compose"] = [{"path": [a, b, cc], "left": c.names(a, b)[i], "right": c.names(b, cc)[j],
                       "value": vec(a, cc, v)}
                      for (a, b, cc), t in c.compose_table.items() for (i, j), v in sorted(t.items())]
    out["units"] = {a: vec(a, a, c.units[a]) for a in c.branes}
    out["differential"] = []
    out["star"] = []
    for a, b in c.pairs():
        for k in range(c.dim(a, b)):
            dv = c.d_vec(a, b, {k: Fraction(1)})
            if dv:
                out["differential"].append({"source": a, "target": b, "element": c.names(a, b)[k],
                                            "value": vec(a, b, dv)})
            sv = c.star_vec(a, b, {k: Fraction(1)})
            out["star"].append({"source": a, "target": b, "element": c.names(a, b)[k], "value": vec(b, a, sv)})
    if cy is not None:
        out["trace"] = {e: {c.names(e, e)[k]: fmt_rational(x) for k, x in t.items() if x}
                        for e, t in cy.trace.items()}
        out["cy_degree"] = cy.degree
    return out


def save_json(data: Mapping, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(data, indent=1, ensure_ascii=False) + "\n")


# graphs ---------------------------------------------------------------------------

def load_graph(source) -> MobiusGraph:
    data = read_json(source)
    try:
        return MobiusGraph.from_json(data["graph"])
    except KeyError:
        raise ParseError("graph", "missing field 'graph'") from None
    except GraphError as e:
        raise ParseError("graph", str(e)) from None


def dump_graph(g: MobiusGraph) -> Dict[str, Any]:
    return {"format_version": FORMAT_VERSION, "graph": g.to_json()}


# words ------------------------------------------------------------------------------

def parse_word(expr, where: str = "word"):
    """Build a surface word from a nested expression.

    ``{"gen": "DiscPlus", "labels": [...]}``, ``{"compose": [w1, w2, ...]}``
    (``w1`` first), ``{"tensor": [...]}``, ``{"identity": [["a", "b"], "c"]}``,
    ``{"permutation": [...items], "perm": [...]}`` and
    ``{"sum": [{"coeff": "p/q", "word": w}, ...]}``.
    """
    from . import surfcat as S
    gens = {"DiscPlus": S.DiscPlus, "DiscAllIn": S.DiscAllIn, "TwistedDisc": S.TwistedDisc,
            "DiscIn2": S.DiscIn2, "DiscOut2": S.DiscOut2, "Annulus": S.Annulus}
    if not isinstance(expr, Mapping):
        raise ParseError(where, "expected an object")
    try:
        if "gen" in expr:
            if expr["gen"] not in gens:
                raise ParseError(f"{where}.gen", f"unknown generator {expr['gen']!r}")
            return S.word(gens[expr["gen"]](*[str(x) for x in expr["labels"]]))
        if "compose" in expr or "tensor" in expr:
            op = "compose" if "compose" in expr else "tensor"
            parts = [parse_word(e, f"{where}.{op}[{i}]") for i, e in enumerate(expr[op])]
            if not parts:
                raise ParseError(where, f"empty {op}")
            w = parts[0]
            for p in parts[1:]:
                w = S.compose(w, p) if op == "compose" else S.tensor(w, p)
            return w
        if "identity" in expr:
            return S.Identity(S.ObjectLabel.of(*expr["identity"]))
        if "permutation" in expr:
            return S.Permutation(S.ObjectLabel.of(*expr["permutation"]), [int(x) for x in expr["perm"]])
        if "sum" in expr:
            terms = [rational(t.get("coeff", 1), f"{where}.sum[{i}].coeff") *
                     parse_word(t["word"], f"{where}.sum[{i}].word") for i, t in enumerate(expr["sum"])]
            if not terms:
                raise ParseError(where, "empty sum")
            w = terms[0]
            for t in terms[1:]:
                w = w + t
            return w
    except S.SurfaceError as e:
        raise ParseError(where, str(e)) from None
    except (KeyError, TypeError) as e:
        raise ParseError(where, f"malformed expression ({e})") from None
    raise ParseError(where, "unrecognised word expression")


def load_word(source):
    data = read_json(source)
    if "word" not in data:
        raise ParseError("word", "missing field 'word'")
    return parse_word(data["word"])
