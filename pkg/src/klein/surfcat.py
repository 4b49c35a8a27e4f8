"""The surface category: words in discs, twisted discs and annuli.

A morphism word is a linear combination of string diagrams.  A diagram has an
ordered list of generator boxes and a wiring that assigns to every *sink*
(a box input or an output of the diagram) the *source* feeding it (a box
output or an input of the diagram).  Identities and permutations are pure
wiring, so the symmetric monoidal structure is implicit.

Boundary items are ``("o", s, t)`` for an open point between the D-brane
labels ``s`` and ``t`` and ``("c",)`` for a closed boundary circle.

Generators and the ports they carry:

* ``DiscPlus(λ_0,…,λ_{n-1})``: inputs ``(λ_k, λ_{k+1})`` for ``k < n-1``, one
  output ``(λ_0, λ_{n-1})``; degree ``n-3`` for ``n ≥ 3``.  ``n = 1`` is the
  unit and ``n = 2`` the identity strip.
* ``TwistedDisc(a, b)``: ``(a, b) → (b, a)``.
* ``DiscIn2(a, b)``: inputs ``(a, b), (b, a)``; ``DiscOut2(a, b)``: outputs
  ``(a, b), (b, a)``.
* ``DiscAllIn(λ_0,…,λ_{n-1})``: inputs ``(λ_k, λ_{k+1 mod n})``; degree ``n-3``.
* ``Annulus(λ_0,…,λ_{n-1})``: open inputs ``(λ_k, λ_{k+1 mod n})`` and one
  closed output; the last input (between ``λ_{n-1}`` and ``λ_0``) is the
  special point.  Degree ``n-1``.

Box order only matters through Koszul signs of odd-degree boxes.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactlin import FiniteComplex, Quotient, SparseMatrix, quotient_presentation, rank

Item = Tuple
CLOSED: Item = ("c",)
Port = Tuple  # ("b", box, k) | ("i", k) for sources, ("b", box, k) | ("o", k) for sinks


class SurfaceError(ValueError):
    pass


class LabelMismatch(SurfaceError):
    pass


class NonTermination(RuntimeError):
    pass


class UnsupportedGenerator(SurfaceError):
    pass


class NondegeneracyRequired(SurfaceError):
    pass


def open_item(s: str, t: str) -> Item:
    return ("o", s, t)


@dataclass(frozen=True)
class ObjectLabel:
    """An ordered boundary: open points with their (s, t) labels and closed circles."""

    items: Tuple[Item, ...]

    @classmethod
    def of(cls, *items) -> "ObjectLabel":
        out = []
        for it in items:
            if it in ("c", CLOSED):
                out.append(CLOSED)
            elif len(it) == 2:
                out.append(open_item(*it))
            else:
                out.append(tuple(it))
        return cls(tuple(out))

    @property
    def open_count(self) -> int:
        return sum(1 for it in self.items if it[0] == "o")

    @property
    def closed_count(self) -> int:
        return sum(1 for it in self.items if it[0] == "c")

    @property
    def s(self) -> Tuple[str, ...]:
        return tuple(it[1] for it in self.items if it[0] == "o")

    @property
    def t(self) -> Tuple[str, ...]:
        return tuple(it[2] for it in self.items if it[0] == "o")

    def __add__(self, other: "ObjectLabel") -> "ObjectLabel":
        return ObjectLabel(self.items + other.items)

    def __len__(self):
        return len(self.items)

    def __str__(self):
        return "[" + ", ".join("c" if it[0] == "c" else f"{it[1]}{it[2]}" for it in self.items) + "]"


# generators -------------------------------------------------------------------

KINDS = ("plus", "twist", "in2", "out2", "allin", "annulus")


@dataclass(frozen=True, order=True)
class Generator:
    kind: str
    labels: Tuple[str, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SurfaceError(f"unknown generator kind {self.kind}")
        n = len(self.labels)
        if self.kind in ("twist", "in2", "out2") and n != 2:
            raise SurfaceError(f"{self.kind} takes two labels")
        if n < 1:
            raise SurfaceError("a generator needs at least one label")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def inputs(self) -> Tuple[Item, ...]:
        lab, n = self.labels, self.n
        if self.kind == "plus":
            return tuple(open_item(lab[k], lab[k + 1]) for k in range(n - 1))
        if self.kind in ("allin", "annulus"):
            return tuple(open_item(lab[k], lab[(k + 1) % n]) for k in range(n))
        a, b = lab
        if self.kind == "twist":
            return (open_item(a, b),)
        if self.kind == "in2":
            return (open_item(a, b), open_item(b, a))
        return ()

    @property
    def outputs(self) -> Tuple[Item, ...]:
        lab = self.labels
        if self.kind == "plus":
            return (open_item(lab[0], lab[-1]),)
        if self.kind == "annulus":
            return (CLOSED,)
        if self.kind == "twist":
            return (open_item(lab[1], lab[0]),)
        if self.kind == "out2":
            return (open_item(lab[0], lab[1]), open_item(lab[1], lab[0]))
        return ()

    @property
    def degree(self) -> int:
        if self.kind in ("plus", "allin"):
            return max(self.n - 3, 0)
        if self.kind == "annulus":
            return self.n - 1
        return 0

    def __str__(self):
        name = {"plus": "D+", "twist": "Dt", "in2": "Din", "out2": "Dout",
                "allin": "D", "annulus": "A"}[self.kind]
        return f"{name}({','.join(self.labels)})"


def DiscPlus(*labels: str) -> Generator:
    return Generator("plus", tuple(labels))


def DiscAllIn(*labels: str) -> Generator:
    return Generator("allin", tuple(labels))


def TwistedDisc(a: str, b: str) -> Generator:
    return Generator("twist", (a, b))


def DiscIn2(a: str, b: str) -> Generator:
    return Generator("in2", (a, b))


def DiscOut2(a: str, b: str) -> Generator:
    return Generator("out2", (a, b))


def Annulus(*labels: str) -> Generator:
    return Generator("annulus", tuple(labels))


# diagrams ---------------------------------------------------------------------

@dataclass(frozen=True)
class Diagram:
    """A canonical string diagram (boxes in traversal order)."""

    source: Tuple[Item, ...]
    target: Tuple[Item, ...]
    boxes: Tuple[Generator, ...]
    wires: Tuple[Tuple[Port, Port], ...]  # sorted (sink, source) pairs

    @property
    def wiring(self) -> Dict[Port, Port]:
        return dict(self.wires)

    def key(self):
        return (len(self.boxes), tuple((g.kind, g.labels) for g in self.boxes), self.wires)

    def __lt__(self, other):
        return self.key() < other.key()

    def __str__(self):
        if not self.boxes:
            perm = [self.wiring[("o", k)][1] for k in range(len(self.target))]
            return "Id" if perm == list(range(len(perm))) else f"σ{tuple(perm)}"
        w = self.wiring

        def src(p):
            return f"in{p[1]}" if p[0] == "i" else f"#{p[1]}.{p[2]}"

        parts = []
        for i, g in enumerate(self.boxes):
            args = ",".join(src(w[("b", i, k)]) for k in range(len(g.inputs)))
            parts.append(f"#{i}={g}[{args}]")
        outs = ",".join(src(w[("o", k)]) for k in range(len(self.target)))
        return "; ".join(parts) + f" → ({outs})"


class Raw:
    """Mutable diagram used while building and rewriting."""

    def __init__(self, source, target, boxes, wires):
        self.source = tuple(source)
        self.target = tuple(target)
        self.boxes = list(boxes)
        self.wires = dict(wires)

    @classmethod
    def of(cls, d: Diagram) -> "Raw":
        return cls(d.source, d.target, d.boxes, d.wiring)

    def feeds(self) -> Dict[Port, Port]:
        return {src: snk for snk, src in self.wires.items()}

    def item_of_source(self, p: Port) -> Item:
        return self.source[p[1]] if p[0] == "i" else self.boxes[p[1]].outputs[p[2]]

    def item_of_sink(self, p: Port) -> Item:
        return self.target[p[1]] if p[0] == "o" else self.boxes[p[1]].inputs[p[2]]

    def check(self) -> None:
        sinks = [("b", i, k) for i, g in enumerate(self.boxes) for k in range(len(g.inputs))]
        sinks += [("o", k) for k in range(len(self.target))]
        sources = [("b", i, k) for i, g in enumerate(self.boxes) for k in range(len(g.outputs))]
        sources += [("i", k) for k in range(len(self.source))]
        if sorted(self.wires) != sorted(sinks) or sorted(self.wires.values()) != sorted(sources):
            raise SurfaceError("wiring must use every port exactly once")
        for snk, src in self.wires.items():
            if self.item_of_sink(snk) != self.item_of_source(src):
                raise LabelMismatch(f"{self.item_of_source(src)} wired into {self.item_of_sink(snk)}")

    def replace(self, remove: Sequence[int], new_boxes: Sequence[Generator],
                new_wires: Mapping[Port, Port]) -> "Raw":
        """Drop boxes ``remove`` and insert ``new_boxes`` where the first one was.

        ``new_wires`` maps sinks to sources; new boxes are addressed as
        ``("n", j, k)``.  Every sink fed by a removed box must be rewired.
        """
        rm = set(remove)
        pos = min(rm) if rm else len(self.boxes)
        keep = [i for i in range(len(self.boxes)) if i not in rm]
        before = [i for i in keep if i < pos]
        after = [i for i in keep if i > pos]
        index = {}
        for j, i in enumerate(before):
            index[("b", i)] = j
        for j in range(len(new_boxes)):
            index[("n", j)] = len(before) + j
        for j, i in enumerate(after):
            index[("b", i)] = len(before) + len(new_boxes) + j
        boxes = [self.boxes[i] for i in before] + list(new_boxes) + [self.boxes[i] for i in after]

        def mp(p: Port) -> Port:
            if p[0] in ("b", "n"):
                return ("b", index[(p[0], p[1])], p[2])
            return p

        wires = {}
        for snk, src in self.wires.items():
            if snk[0] == "b" and snk[1] in rm:
                continue
            if snk in new_wires:
                continue
            if src[0] == "b" and src[1] in rm:
                raise SurfaceError("a sink fed by a removed box was not rewired")
            wires[mp(snk)] = mp(src)
        for snk, src in new_wires.items():
            wires[mp(snk)] = mp(src)
        return Raw(self.source, self.target, boxes, wires)

    def topological_order(self) -> List[int]:
        deps = {i: set() for i in range(len(self.boxes))}
        for snk, src in self.wires.items():
            if snk[0] == "b" and src[0] == "b":
                deps[snk[1]].add(src[1])
        order, done = [], set()
        while len(order) < len(self.boxes):
            ready = [i for i in deps if i not in done and deps[i] <= done]
            if not ready:
                raise SurfaceError("diagram has a cycle")
            order.append(ready[0])
            done.add(ready[0])
        return order


def _parity(perm: Sequence[int], odd: Sequence[bool]) -> int:
    """Koszul sign of listing the odd items in the order ``perm``."""
    seq = [p for p in perm if odd[p]]
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def _dfs_order(raw: Raw, roots: Iterable[int], allowed: Optional[set] = None) -> List[int]:
    feeds = raw.feeds()
    seen, order = set(), []

    def visit(b):
        stack = [b]
        while stack:
            x = stack.pop()
            if x in seen or (allowed is not None and x not in allowed):
                continue
            seen.add(x)
            order.append(x)
            nxt = []
            g = raw.boxes[x]
            for k in range(len(g.inputs)):
                src = raw.wires[("b", x, k)]
                if src[0] == "b":
                    nxt.append(src[1])
            for k in range(len(g.outputs)):
                snk = feeds[("b", x, k)]
                if snk[0] == "b":
                    nxt.append(snk[1])
            stack.extend(reversed(nxt))

    for r in roots:
        visit(r)
    return order


def _serialize(raw: Raw, order: Sequence[int]):
    index = {b: i for i, b in enumerate(order)}

    def mp(p):
        return ("b", index[p[1]], p[2]) if p[0] == "b" else p

    boxes = tuple(raw.boxes[b] for b in order)
    wires = tuple(sorted((mp(s), mp(t)) for s, t in raw.wires.items()
                         if (s[0] != "b" or s[1] in index) and (t[0] != "b" or t[1] in index)))
    return boxes, wires


def canonical(raw: Raw) -> Tuple[int, Optional[Diagram]]:
    """Canonical diagram and the Koszul sign relating it to ``raw`` (0 if it vanishes)."""
    feeds = raw.feeds()
    roots = []
    for k in range(len(raw.source)):
        snk = feeds[("i", k)]
        if snk[0] == "b":
            roots.append(snk[1])
    for k in range(len(raw.target)):
        src = raw.wires[("o", k)]
        if src[0] == "b":
            roots.append(src[1])
    order = _dfs_order(raw, roots)
    rest = [b for b in range(len(raw.boxes)) if b not in set(order)]
    odd = [g.degree % 2 == 1 for g in raw.boxes]
    comps = []
    while rest:
        comp = set(_dfs_order(raw, [rest[0]]))
        best = None
        for r in sorted(comp):
            o = _dfs_order(raw, [r], comp)
            ser = _serialize(raw, o)
            sgn = _parity(o, odd)
            key = (tuple((g.kind, g.labels) for g in ser[0]), ser[1])
            if best is None or key < best[0]:
                best = (key, o, sgn)
            elif key == best[0] and sgn != best[2]:
                return 0, None  # odd self-symmetry
        comps.append(best)
        rest = [b for b in rest if b not in comp]
    comps.sort(key=lambda x: x[0])
    for a, b in zip(comps, comps[1:]):
        if a[0] == b[0] and sum(raw.boxes[x].degree for x in a[1]) % 2:
            return 0, None  # two identical odd floating pieces
    for c in comps:
        order.extend(c[1])
    boxes, wires = _serialize(raw, order)
    return _parity(order, odd), Diagram(raw.source, raw.target, boxes, wires)


# words ------------------------------------------------------------------------

class MorphismWord:
    """A rational linear combination of canonical diagrams ``source → target``."""

    def __init__(self, source: ObjectLabel, target: ObjectLabel,
                 terms: Optional[Mapping[Diagram, Fraction]] = None):
        self.source = source
        self.target = target
        self.terms: Dict[Diagram, Fraction] = {d: Fraction(v) for d, v in (terms or {}).items() if v}

    @classmethod
    def from_raws(cls, source, target, raws: Iterable[Tuple[Fraction, Raw]]) -> "MorphismWord":
        terms: Dict[Diagram, Fraction] = {}
        for c, r in raws:
            s, d = canonical(r)
            if s and c:
                terms[d] = terms.get(d, 0) + s * Fraction(c)
        return cls(source, target, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, MorphismWord) and self.source == other.source
                and self.target == other.target and self.terms == other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def _same(self, other):
        if self.source != other.source or self.target != other.target:
            raise LabelMismatch(f"cannot add words {self.source}→{self.target} and {other.source}→{other.target}")

    def __add__(self, other: "MorphismWord") -> "MorphismWord":
        self._same(other)
        t = dict(self.terms)
        for d, v in other.terms.items():
            t[d] = t.get(d, 0) + v
        return MorphismWord(self.source, self.target, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MorphismWord":
        return MorphismWord(self.source, self.target, {d: v * Fraction(c) for d, v in self.terms.items()})

    __rmul__ = scale

    def then(self, other: "MorphismWord") -> "MorphismWord":
        return compose(self, other)

    def __matmul__(self, other: "MorphismWord") -> "MorphismWord":
        return tensor(self, other)

    @property
    def size(self) -> int:
        return sum(max(1, len(d.boxes)) for d in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms):
            v = self.terms[d]
            coeff = "" if v == 1 else "-" if v == -1 else f"{v}·"
            parts.append(f"{coeff}{d}")
        return " + ".join(parts)

    __repr__ = __str__


def _as_label(x) -> ObjectLabel:
    return x if isinstance(x, ObjectLabel) else ObjectLabel.of(*x)


def word(g: Generator) -> MorphismWord:
    src, tgt = ObjectLabel(g.inputs), ObjectLabel(g.outputs)
    wires = {("b", 0, k): ("i", k) for k in range(len(g.inputs))}
    wires.update({("o", k): ("b", 0, k) for k in range(len(g.outputs))})
    return MorphismWord.from_raws(src, tgt, [(1, Raw(src.items, tgt.items, [g], wires))])


def Identity(alpha) -> MorphismWord:
    alpha = _as_label(alpha)
    return Permutation(alpha, list(range(len(alpha))))


def Permutation(alpha, perm: Sequence[int]) -> MorphismWord:
    """The symmetry sending input ``perm[k]`` to output ``k``."""
    alpha = _as_label(alpha)
    if sorted(perm) != list(range(len(alpha))):
        raise SurfaceError("not a permutation")
    tgt = ObjectLabel(tuple(alpha.items[p] for p in perm))
    wires = {("o", k): ("i", p) for k, p in enumerate(perm)}
    return MorphismWord.from_raws(alpha, tgt, [(1, Raw(alpha.items, tgt.items, [], wires))])


def _compose_raw(a: Raw, b: Raw) -> Raw:
    off = len(a.boxes)
    wires = {s: t for s, t in a.wires.items() if s[0] != "o"}
    for snk, src in b.wires.items():
        snk2 = ("b", snk[1] + off, snk[2]) if snk[0] == "b" else snk
        if src[0] == "i":
            src2 = a.wires[("o", src[1])]
        else:
            src2 = ("b", src[1] + off, src[2])
        wires[snk2] = src2
    return Raw(a.source, b.target, a.boxes + b.boxes, wires)


def _tensor_raw(a: Raw, b: Raw) -> Raw:
    # boxes of b run first: (f ⊗ 1)(1 ⊗ g) = f ⊗ g with no sign
    off, ni, no = len(b.boxes), len(a.source), len(a.target)
    wires = {}
    for snk, src in a.wires.items():
        snk2 = ("b", snk[1] + off, snk[2]) if snk[0] == "b" else snk
        src2 = ("b", src[1] + off, src[2]) if src[0] == "b" else src
        wires[snk2] = src2
    for snk, src in b.wires.items():
        snk2 = snk if snk[0] == "b" else ("o", snk[1] + no)
        src2 = src if src[0] == "b" else ("i", src[1] + ni)
        wires[snk2] = src2
    return Raw(a.source + b.source, a.target + b.target, b.boxes + a.boxes, wires)


def compose(w1: MorphismWord, w2: MorphismWord) -> MorphismWord:
    """``w1`` followed by ``w2``."""
    if w1.target != w2.source:
        raise LabelMismatch(f"target {w1.target} does not match source {w2.source}")
    raws = [(x * y, _compose_raw(Raw.of(d1), Raw.of(d2)))
            for (d1, x), (d2, y) in product(w1.terms.items(), w2.terms.items())]
    return MorphismWord.from_raws(w1.source, w2.target, raws)


def tensor(w1: MorphismWord, w2: MorphismWord) -> MorphismWord:
    raws = [(x * y, _tensor_raw(Raw.of(d1), Raw.of(d2)))
            for (d1, x), (d2, y) in product(w1.terms.items(), w2.terms.items())]
    return MorphismWord.from_raws(w1.source + w2.source, w1.target + w2.target, raws)


def from_raw(raw: Raw, coeff=1) -> MorphismWord:
    raw.check()
    return MorphismWord.from_raws(ObjectLabel(raw.source), ObjectLabel(raw.target), [(coeff, raw)])


# rewriting ----------------------------------------------------------------------

def rewrite_bound(w: MorphismWord) -> int:
    env = os.environ.get("KLEIN_MAX_REWRITE_STEPS")
    if env:
        return int(env)
    return 10 * max(1, w.size)


def _is_unit(g: Generator) -> bool:
    return g.kind == "plus" and g.n == 1


def _rule_strip(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind == "plus" and g.n == 2:
        return [(1, raw.replace([b], [], {feeds[("b", b, 0)]: raw.wires[("b", b, 0)]}))]


def _rule_allin2(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind == "allin" and g.n == 2:
        return [(1, raw.replace([b], [DiscIn2(*g.labels)],
                                {("n", 0, k): raw.wires[("b", b, k)] for k in range(2)}))]


def _rule_twist_twist(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind != "twist":
        return None
    src = raw.wires[("b", b, 0)]
    if src[0] == "b" and raw.boxes[src[1]].kind == "twist":
        a = src[1]
        return [(1, raw.replace([a, b], [], {feeds[("b", b, 0)]: raw.wires[("b", a, 0)]}))]


def _rule_unit_plus(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind != "plus" or g.n < 3:
        return None
    for k in range(g.n - 1):
        src = raw.wires[("b", b, k)]
        if src[0] == "b" and _is_unit(raw.boxes[src[1]]):
            if g.n > 3:
                return []
            other = raw.wires[("b", b, 1 - k)]
            return [(1, raw.replace([src[1], b], [], {feeds[("b", b, 0)]: other}))]


def _rule_unit_annulus(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind != "annulus":
        return None
    for k in range(g.n - 1):
        src = raw.wires[("b", b, k)]
        if src[0] == "b" and _is_unit(raw.boxes[src[1]]):
            return []


def _rule_twisted_inputs(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind != "plus" or g.n < 3:
        return None
    ts = []
    for k in range(g.n - 1):
        src = raw.wires[("b", b, k)]
        if src[0] != "b" or raw.boxes[src[1]].kind != "twist":
            return None
        ts.append(src[1])
    lab = g.labels
    plus = DiscPlus(*reversed(lab))
    tw = TwistedDisc(lab[-1], lab[0])
    new = {("n", 0, m): raw.wires[("b", ts[g.n - 2 - m], 0)] for m in range(g.n - 1)}
    new[("n", 1, 0)] = ("n", 0, 0)
    new[feeds[("b", b, 0)]] = ("n", 1, 0)
    return [(1, raw.replace(ts + [b], [plus, tw], new))]


def _rule_snake(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind != "out2":
        return None
    for p in (0, 1):
        snk = feeds[("b", b, p)]
        if snk[0] != "b" or raw.boxes[snk[1]].kind != "in2":
            continue
        i, q = snk[1], snk[2]
        x = raw.wires[("b", i, 1 - q)]
        if x == ("b", b, 1 - p):
            continue  # closed loop, not a snake
        s = feeds[("b", b, 1 - p)]
        return [(snake_sign(p, q), raw.replace([b, i], [], {s: x}))]


def snake_sign(p: int, q: int) -> int:
    return 1


def rotate_allin(raw: Raw, b: int, r: int) -> Tuple[int, Raw]:
    """Rotate the labels of an all-in disc by ``r`` steps, rewiring its inputs."""
    g = raw.boxes[b]
    n = g.n
    lab = g.labels[r:] + g.labels[:r]
    new = {("n", 0, k): raw.wires[("b", b, (k + r) % n)] for k in range(n)}
    sign = -1 if ((n - 1) * r) % 2 else 1
    return sign, raw.replace([b], [DiscAllIn(*lab)], new)


def _rule_cyclic(raw: Raw, b: int, feeds):
    g = raw.boxes[b]
    if g.kind != "allin" or g.n < 3:
        return None
    s0, d0 = canonical(raw)
    if d0 is None:
        return []
    best = (d0.key(), 0, None)
    for r in range(1, g.n):
        sg, rr = rotate_allin(raw, b, r)
        s1, d1 = canonical(rr)
        if d1 is None:
            return []
        if d1.key() == d0.key():
            if sg * s1 != s0:
                return []
            continue
        if d1.key() < best[0]:
            best = (d1.key(), sg, rr)
    if best[2] is None:
        return None
    return [(best[1], best[2])]


RULES = [_rule_strip, _rule_allin2, _rule_twist_twist, _rule_unit_plus, _rule_unit_annulus,
         _rule_twisted_inputs, _rule_snake, _rule_cyclic]


def _rewrite_once(raw: Raw):
    feeds = raw.feeds()
    for b in raw.topological_order():
        for rule in RULES:
            res = rule(raw, b, feeds)
            if res is not None:
                return res
    return None


def normalize(w: MorphismWord, max_steps: Optional[int] = None) -> MorphismWord:
    """Apply the relations as rewrite rules until no rule applies."""
    bound = rewrite_bound(w) if max_steps is None else max_steps
    work = [(v, Raw.of(d)) for d, v in w.terms.items()]
    done: List[Tuple[Fraction, Raw]] = []
    steps = 0
    while work:
        c, raw = work.pop()
        res = _rewrite_once(raw)
        if res is None:
            done.append((c, raw))
            continue
        steps += 1
        if steps > bound:
            raise NonTermination(f"rewriting exceeded {bound} steps")
        work.extend((c * s, r) for s, r in res)
    return MorphismWord.from_raws(w.source, w.target, done)


# differential -------------------------------------------------------------------

def disc_sign(i: int, j: int, l: int) -> int:
    """Sign of the bubble of ``j`` inputs starting at input ``i`` (``l`` inputs after)."""
    return -1 if (1 + i + j * l) % 2 else 1


def annulus_sign(n: int, s: int, j: int) -> int:
    """Sign of the bubble of ``j`` consecutive slots starting at slot ``s`` (cyclically).

    ``e = s + j - n`` counts the slots taken after passing the special point.
    The size-2 values match the Hochschild products and the rest are forced
    by d² = 0.
    """
    e = s + j - n
    x = 1 + s * (j + 1) + n * j if e <= 0 else (n + 1) * (e + 1)
    return -1 if x % 2 else 1


def generator_differential(g: Generator) -> List[Tuple[int, List[Generator], Dict[Port, Port]]]:
    """``d g`` as a list of (sign, [inner, outer], wiring) with ports of ``g`` as boundary."""
    out = []
    lab, n = g.labels, g.n
    if g.kind in ("plus", "allin"):
        k = n - 1  # inputs feeding the bubble range over 0..n-2 in both cases
        for j in range(2, k):
            for i in range(0, k - j + 1):
                l = k - i - j
                inner = DiscPlus(*lab[i:i + j + 1])
                outer = Generator(g.kind, lab[:i + 1] + lab[i + j:])
                w = {("n", 0, m): ("i", i + m) for m in range(j)}
                for m in range(i):
                    w[("n", 1, m)] = ("i", m)
                w[("n", 1, i)] = ("n", 0, 0)
                rest = len(outer.inputs) - i - 1
                for m in range(rest):
                    w[("n", 1, i + 1 + m)] = ("i", i + j + m)
                if g.kind == "plus":
                    w[("o", 0)] = ("n", 1, 0)
                out.append((disc_sign(i, j, l), [inner, outer], w))
    elif g.kind == "annulus":
        for j in range(2, n + 1):
            for s in range(n):
                e = s + j - n
                if s + j <= n - 1:
                    inner = DiscPlus(*lab[s:s + j + 1])
                    outer = Annulus(*(lab[:s + 1] + lab[s + j:]))
                    w = {("n", 0, m): ("i", s + m) for m in range(j)}
                    for m in range(s):
                        w[("n", 1, m)] = ("i", m)
                    w[("n", 1, s)] = ("n", 0, 0)
                    for m in range(n - s - j):
                        w[("n", 1, s + 1 + m)] = ("i", s + j + m)
                elif e >= 0 and (j < n or True):
                    if j < n and e > s - 1:
                        continue
                    slots = [(s + m) % n for m in range(j)]
                    inner = DiscPlus(*[lab[x] for x in slots] + [lab[e % n]])
                    outer_slots = list(range(e, s)) if j < n else []
                    outer = Annulus(*([lab[x] for x in outer_slots] + [lab[s]]))
                    w = {("n", 0, m): ("i", x) for m, x in enumerate(slots)}
                    for m, x in enumerate(outer_slots):
                        w[("n", 1, m)] = ("i", x)
                    w[("n", 1, len(outer_slots))] = ("n", 0, 0)
                else:
                    continue
                w[("o", 0)] = ("n", 1, 0)
                out.append((annulus_sign(n, s, j), [inner, outer], w))
    return out


def _box_differential(raw: Raw, b: int) -> List[Tuple[int, Raw]]:
    g = raw.boxes[b]
    feeds = raw.feeds()
    res = []
    for sign, new_boxes, w in generator_differential(g):
        nw = {}
        for snk, src in w.items():
            if src[0] == "i":
                src = raw.wires[("b", b, src[1])]
            if snk[0] == "o":
                snk = feeds[("b", b, snk[1])]
            nw[snk] = src
        res.append((sign, raw.replace([b], new_boxes, nw)))
    return res


def differential(w: MorphismWord) -> MorphismWord:
    """Leibniz extension of the generator differential (Koszul signs in box order)."""
    raws = []
    for d, v in w.terms.items():
        raw = Raw.of(d)
        # list order is evaluation order, so the written composite is reversed
        after = sum(g.degree for g in raw.boxes)
        for b, g in enumerate(raw.boxes):
            after -= g.degree
            koszul = -1 if after % 2 else 1
            for s, r in _box_differential(raw, b):
                raws.append((v * s * koszul, r))
    return MorphismWord.from_raws(w.source, w.target, raws)


# evaluation ---------------------------------------------------------------------

def _koszul_move(degs: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of reordering graded entries so that position ``k`` holds entry ``perm[k]``."""
    seq = [p for p in perm if degs[p] % 2]
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


def annulus_word_sign(degs: Sequence[int]) -> int:
    """Sign attached to sending annulus inputs ``(h_0..h_{n-1})`` to the chain with ``h_{n-1}`` first."""
    n, total = len(degs), sum(degs)
    x = degs[-1] * (total - degs[-1]) + sum(k * d for k, d in enumerate(degs))
    x += (n + 1) * total + n * degs[-1]
    return -1 if x % 2 else 1


class Evaluator:
    """Evaluates words on an A∞ category with optional CY data and closed states.

    ``closed`` is a normalized involutive Hochschild complex; annulus boxes
    send their inputs to chains of that complex.
    """

    def __init__(self, c, cy=None, closed=None, dg=None):
        self.c = c
        self.cy = cy
        self.closed = closed
        self.dg = dg if dg is not None else (closed.category if closed is not None else None)
        self._copairing: Dict[Tuple[str, str], Dict[Tuple[int, int], Fraction]] = {}
        if closed is not None:
            self.closed_basis = [(k, i) for k, q in sorted(closed.quotients.items()) for i in range(q.dim)]
            self.closed_index = {b: n for n, b in enumerate(self.closed_basis)}

    # bases
    def dim(self, item: Item) -> int:
        if item[0] == "c":
            if self.closed is None:
                raise UnsupportedGenerator("closed boundaries need a Hochschild complex")
            return len(self.closed_basis)
        return self.c.dim(item[1], item[2])

    def degree(self, item: Item, i: int) -> int:
        if item[0] == "c":
            return self.closed_basis[i][0]
        return self.c.degree(item[1], item[2], i)

    def box_degree(self, g: Generator) -> int:
        shift = self.cy.degree if self.cy is not None else 0
        if g.kind in ("in2", "allin"):
            return g.degree - shift
        if g.kind == "out2":
            return g.degree + shift
        return g.degree

    def _need_cy(self, g):
        if self.cy is None:
            raise UnsupportedGenerator(f"{g} needs a trace")

    def copairing(self, a: str, b: str) -> Dict[Tuple[int, int], Fraction]:
        if (a, b) not in self._copairing:
            from .ainfty import pairing
            from .exactlin import _rref_rows
            n, m = self.c.dim(a, b), self.c.dim(b, a)
            p = [[pairing(self.c, self.cy, a, b, {i: Fraction(1)}, {j: Fraction(1)}) for j in range(m)]
                 for i in range(n)]
            if n != m:
                raise NondegeneracyRequired(f"pairing on ({a},{b}) is not square")
            inv = _invert(p)
            if inv is None:
                raise NondegeneracyRequired(f"pairing on ({a},{b}) is degenerate")
            # K = (P^T)^{-1}: Σ_j K[i][j] ⟨x, e_j⟩ recovers the e_i-coefficient of x
            self._copairing[(a, b)] = {(i, j): inv[j][i] for i in range(n) for j in range(m) if inv[j][i]}
        return self._copairing[(a, b)]

    def apply(self, g: Generator, args: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
        c, lab = self.c, g.labels
        if g.kind == "plus":
            if g.n == 1:
                return {(k,): v for k, v in c.units[lab[0]].items() if v}
            if g.n == 2:
                return {args: Fraction(1)}
            return {(k,): v for k, v in c.m(lab, args).items() if v}
        if g.kind == "twist":
            return {(k,): v for k, v in c.star_vec(lab[0], lab[1], {args[0]: Fraction(1)}).items() if v}
        if g.kind == "in2":
            self._need_cy(g)
            from .ainfty import pairing
            v = pairing(c, self.cy, lab[0], lab[1], {args[0]: Fraction(1)}, {args[1]: Fraction(1)})
            return {(): v} if v else {}
        if g.kind == "out2":
            self._need_cy(g)
            return dict(self.copairing(lab[0], lab[1]))
        if g.kind == "allin":
            self._need_cy(g)
            from .ainfty import pairing
            if g.n == 1:
                v = self.cy.tr(lab[0], {args[0]: Fraction(1)})
            elif g.n == 2:
                v = pairing(c, self.cy, lab[0], lab[1], {args[0]: Fraction(1)}, {args[1]: Fraction(1)})
            else:
                v = pairing(c, self.cy, lab[0], lab[-1], c.m(lab, args[:-1]), {args[-1]: Fraction(1)})
            return {(): v} if v else {}
        if g.kind == "annulus":
            if self.closed is None:
                raise UnsupportedGenerator("annulus evaluation needs a normalized Hochschild complex")
            from .hochschild import CyclicWord
            n = g.n
            degs = [c.degree(*g.inputs[k][1:], args[k]) for k in range(n)]
            w = CyclicWord((lab[-1],) + lab[:-1], (args[-1],) + args[:-1])
            coords = self.closed.coords({w: Fraction(annulus_word_sign(degs))})
            return {(self.closed_index[(k, i)],): v for k, vec in coords.items() for i, v in vec.items() if v}
        raise UnsupportedGenerator(str(g))

    # diagrams
    def diagram_matrix(self, d: Diagram) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]:
        """Entries ``(out_tuple, in_tuple) → coefficient``."""
        raw = Raw.of(d)
        order = raw.topological_order()
        odd = [g.degree % 2 == 1 for g in raw.boxes]
        pre = _parity(order, odd)
        src_items = list(d.source)
        out: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction] = {}
        for inp in product(*[range(self.dim(it)) for it in src_items]):
            live = [("i", k) for k in range(len(src_items))]
            items = {("i", k): it for k, it in enumerate(src_items)}
            state = {tuple(inp): Fraction(pre)}
            for b in order:
                g = raw.boxes[b]
                ins = [raw.wires[("b", b, k)] for k in range(len(g.inputs))]
                rest = [w for w in live if w not in ins]
                perm = [live.index(w) for w in rest + ins]
                bd = self.box_degree(g)
                new_state: Dict[Tuple[int, ...], Fraction] = {}
                for tup, v in state.items():
                    degs = [self.degree(items[w], i) for w, i in zip(live, tup)]
                    s = _koszul_move(degs, perm)
                    moved = [tup[p] for p in perm]
                    head, args = moved[:len(rest)], tuple(moved[len(rest):])
                    if bd % 2 and sum(degs[p] for p in perm[:len(rest)]) % 2:
                        s = -s
                    for res, x in self.apply(g, args).items():
                        key = tuple(head) + res
                        new_state[key] = new_state.get(key, 0) + v * s * x
                live = rest + [("b", b, k) for k in range(len(g.outputs))]
                for k, it in enumerate(g.outputs):
                    items[("b", b, k)] = it
                state = {k: v for k, v in new_state.items() if v}
            final = [raw.wires[("o", k)] for k in range(len(d.target))]
            perm = [live.index(w) for w in final]
            for tup, v in state.items():
                degs = [self.degree(items[w], i) for w, i in zip(live, tup)]
                key = (tuple(tup[p] for p in perm), tuple(inp))
                out[key] = out.get(key, 0) + v * _koszul_move(degs, perm)
        return {k: v for k, v in out.items() if v}

    def object_differential(self, items: Sequence[Item]) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]:
        """The tensor differential: ``m_1`` on open factors and ``d`` on closed ones."""
        out: Dict = {}
        closed_d = {}
        if any(it[0] == "c" for it in items):
            for k in self.closed.quotients:
                if k - 1 in self.closed.quotients:
                    for (r, col), v in self.closed.d(k).entries.items():
                        closed_d.setdefault(self.closed_index[(k, col)], {})[self.closed_index[(k - 1, r)]] = v
        for tup in product(*[range(self.dim(it)) for it in items]):
            before = 0
            for pos, it in enumerate(items):
                if it[0] == "c":
                    img = closed_d.get(tup[pos], {})
                else:
                    img = self.c.m((it[1], it[2]), (tup[pos],))
                s = -1 if before % 2 else 1
                for j, v in img.items():
                    key = (tup[:pos] + (j,) + tup[pos + 1:], tup)
                    out[key] = out.get(key, 0) + s * v
                before += self.degree(it, tup[pos])
        return {k: v for k, v in out.items() if v}

    def tuple_index(self, items: Sequence[Item], tup: Sequence[int]) -> int:
        i = 0
        for it, x in zip(items, tup):
            i = i * self.dim(it) + x
        return i

    def as_matrix(self, entries, src: Sequence[Item], tgt: Sequence[Item]) -> SparseMatrix:
        rows = 1
        for it in tgt:
            rows *= self.dim(it)
        cols = 1
        for it in src:
            cols *= self.dim(it)
        return SparseMatrix(rows, cols, {(self.tuple_index(tgt, o), self.tuple_index(src, i)): v
                                         for (o, i), v in entries.items()})

    def check_labels(self, w: MorphismWord) -> None:
        known = set(self.c.branes)
        for it in w.source.items + w.target.items:
            if it[0] == "o" and not {it[1], it[2]} <= known:
                raise LabelMismatch(f"labels of {it} are not branes of the category")
        for d in w.terms:
            for g in d.boxes:
                if not set(g.labels) <= known:
                    raise LabelMismatch(f"{g} uses labels that are not branes of the category")

    def word_matrix(self, w: MorphismWord) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]:
        self.check_labels(w)
        out: Dict = {}
        for d, v in w.terms.items():
            for k, x in self.diagram_matrix(d).items():
                out[k] = out.get(k, 0) + v * x
        return {k: v for k, v in out.items() if v}


def _invert(m: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def evaluate(w: MorphismWord, c, cy=None, closed=None) -> SparseMatrix:
    """The matrix of ``w``; basis tuples of source and target are indexed in product order."""
    ev = Evaluator(c, cy, closed)
    return ev.as_matrix(ev.word_matrix(w), w.source.items, w.target.items)


# closed states --------------------------------------------------------------------

class DescentError(SurfaceError):
    pass


def _open_part(d: Diagram) -> Tuple[int, Generator, Raw]:
    """Split a diagram ending in one annulus into (sign, annulus, open diagram feeding it)."""
    raw = Raw.of(d)
    a = next(i for i, g in enumerate(raw.boxes) if g.kind == "annulus")
    ann = raw.boxes[a]
    later = sum(g.degree for g in raw.boxes[a + 1:])
    sign = -1 if (ann.degree * later) % 2 else 1
    keep = [i for i in range(len(raw.boxes)) if i != a]
    index = {i: j for j, i in enumerate(keep)}

    def mp(p):
        return ("b", index[p[1]], p[2]) if p[0] == "b" else p

    wires = {}
    for snk, src in raw.wires.items():
        if snk[0] == "o":
            continue
        if snk[0] == "b" and snk[1] == a:
            wires[("o", snk[2])] = mp(src)
        else:
            wires[mp(snk)] = mp(src)
    return sign, ann, Raw(raw.source, ann.inputs, [raw.boxes[i] for i in keep], wires)


@dataclass
class ClosedStateComplex:
    """Annuli tensored with open inputs, modulo unit insertion and reflection.

    ``states[k]`` lists pairs ``(labels, h)`` with ``h[i] ∈ Hom(λ_i, λ_{i+1})``
    (indices mod n) and the special input last.
    """

    category: object
    trunc: int
    states: Dict[int, List[Tuple[Tuple[str, ...], Tuple[int, ...]]]]
    quotients: Dict[int, Quotient]
    underlying: FiniteComplex

    def dims(self) -> Dict[int, int]:
        return {k: q.dim for k, q in sorted(self.quotients.items())}

    def d(self, k: int) -> SparseMatrix:
        return self.underlying.d(k)


def _state_degree(c, lab, h) -> int:
    n = len(lab)
    return n - 1 + sum(c.degree(lab[i], lab[(i + 1) % n], x) for i, x in enumerate(h))


def _hochschild_word(lab, h):
    from .hochschild import CyclicWord
    return CyclicWord((lab[-1],) + tuple(lab[:-1]), (h[-1],) + tuple(h[:-1]))


def _identification_sign(c, lab, h) -> int:
    n = len(lab)
    return annulus_word_sign([c.degree(lab[i], lab[(i + 1) % n], x) for i, x in enumerate(h)])


def closed_state_complex(c, trunc: int) -> ClosedStateComplex:
    """The closed-state complex of a DG category with involution, words up to length ``trunc``."""
    from .ainfty import from_dg
    from .hochschild import reflection_sign
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    A = from_dg(c, 2)
    ev = Evaluator(A)
    states: Dict[int, List] = {}
    for n in range(1, trunc + 1):
        for lab in product(c.branes, repeat=n):
            dims = [c.dim(lab[i], lab[(i + 1) % n]) for i in range(n)]
            for h in product(*[range(x) for x in dims]):
                states.setdefault(_state_degree(c, lab, h), []).append((lab, h))
    index = {s: (k, j) for k, ss in states.items() for j, s in enumerate(ss)}

    def add(acc, key, v):
        k, j = index[key]
        acc.setdefault(k, {})
        acc[k][j] = acc[k].get(j, 0) + v

    # differential on ambient states
    pieces: Dict[Tuple[str, ...], List] = {}
    for lab in {s[0] for ss in states.values() for s in ss}:
        lst = []
        for dg, coeff in differential(word(Annulus(*lab))).terms.items():
            sign, ann, raw = _open_part(dg)
            mat: Dict[Tuple[int, ...], Dict] = {}
            for (out, inp), v in ev.diagram_matrix(Diagram(raw.source, raw.target, tuple(raw.boxes),
                                                           tuple(sorted(raw.wires.items())))).items():
                mat.setdefault(inp, {})[out] = v
            lst.append((coeff * sign, ann.labels, mat))
        pieces[lab] = lst
    dmat: Dict[int, Dict[Tuple[int, int], Fraction]] = {k: {} for k in states}
    for k, ss in states.items():
        for j, (lab, h) in enumerate(ss):
            img: Dict[int, Dict[int, Fraction]] = {}
            for coeff, lab2, mat in pieces[lab]:
                for out, v in mat.get(h, {}).items():
                    add(img, (lab2, out), coeff * v)
            n = len(lab)
            before = 0
            for i, x in enumerate(h):
                a, b = lab[i], lab[(i + 1) % n]
                s = (-1 if (n - 1 + before) % 2 else 1)
                for y, v in A.m((a, b), (x,)).items():
                    add(img, (lab, h[:i] + (y,) + h[i + 1:]), s * v)
                before += c.degree(a, b, x)
            for kk, vec in img.items():
                if kk != k - 1:
                    raise SurfaceError("closed-state differential has the wrong degree")
                for i, v in vec.items():
                    if v:
                        dmat[k][(i, j)] = dmat[k].get((i, j), 0) + v
    # relations
    rels: Dict[int, List[Dict[int, Fraction]]] = {k: [] for k in states}
    for k, ss in states.items():
        for j, (lab, h) in enumerate(ss):
            n = len(lab)
            rel: Dict[int, Dict[int, Fraction]] = {k: {j: Fraction(1)}}
            rev = tuple(reversed(lab))
            slots = [c.star_vec(lab[i], lab[(i + 1) % n], {h[i]: Fraction(1)}) for i in range(n - 2, -1, -1)]
            slots.append(c.star_vec(lab[n - 1], lab[0], {h[n - 1]: Fraction(1)}))
            eps = reflection_sign(c, _hochschild_word(lab, h)) * _identification_sign(c, lab, h)
            for items in product(*[list(v.items()) for v in slots]):
                h2 = tuple(i for i, _ in items)
                x = Fraction(eps * _identification_sign(c, rev, h2))
                for _, y in items:
                    x *= y
                add(rel, (rev, h2), -x)
            rel = {kk: {i: v for i, v in vec.items() if v} for kk, vec in rel.items()}
            if rel.get(k):
                rels[k].append(rel[k])
            if n >= 2:
                for i in range(n - 1):
                    a, b = lab[i], lab[i + 1]
                    if a != b or h[i] != min(c.units[a]):
                        continue
                    # one unit relation per choice of the other slots
                    u = c.units[a]
                    vec: Dict[int, Dict[int, Fraction]] = {}
                    for y, v in u.items():
                        add(vec, (lab, h[:i] + (y,) + h[i + 1:]), v)
                    if vec.get(k):
                        rels[k].append({ii: v for ii, v in vec[k].items() if v})
    quots = {k: quotient_presentation(len(ss), rels[k]) for k, ss in states.items()}
    diffs = {}
    for k in states:
        if k - 1 not in states:
            continue
        D = SparseMatrix(len(states[k - 1]), len(states[k]), dmat[k])
        for r in rels[k]:
            if quots[k - 1].project(D.apply(r)):
                raise DescentError(f"closed-state differential does not descend in degree {k}")
        diffs[k] = quots[k - 1].projection @ D @ quots[k].section
    dims = {k: q.dim for k, q in quots.items()}
    return ClosedStateComplex(c, trunc, states, quots, FiniteComplex(dims, diffs))


def compare_with_hochschild(cs: ClosedStateComplex, hh) -> Dict[str, object]:
    """Check the identification ``A(λ) ⊗ h ↦ ±(h_{n-1}, h_0, …, h_{n-2})`` degree by degree.

    Returns the dimensions of both sides and whether the identification is an
    isomorphism commuting with the differentials.
    """
    c = cs.category
    out = {"dims": cs.dims(), "hochschild_dims": hh.dims(), "iso": True, "commutes": True}
    J = {}
    for k, q in cs.quotients.items():
        if k not in hh.quotients:
            out["iso"] = False
            continue
        ent = {}
        for col, rep in enumerate(q.representatives):
            lab, h = cs.states[k][rep]
            w = _hochschild_word(lab, h)
            vec = hh.coords({w: Fraction(_identification_sign(c, lab, h))}).get(k, {})
            for r, v in vec.items():
                ent[(r, col)] = v
        J[k] = SparseMatrix(hh.quotients[k].dim, q.dim, ent)
        if not (q.dim == hh.quotients[k].dim and rank(J[k]) == q.dim):
            out["iso"] = False
    for k in J:
        if k - 1 in J:
            lhs = hh.d(k) @ J[k]
            rhs = J[k - 1] @ cs.d(k)
            if lhs.entries != rhs.entries:
                out["commutes"] = False
    return out
