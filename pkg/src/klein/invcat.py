"""Basis-presented involutive DG categories over a finite set of branes.

Conventions, fixed once for the whole package:

* ``compose(f, g)`` with ``f: a → b`` and ``g: b → c`` is ``g∘f : a → c``.
* Leibniz: ``d(g∘f) = d(g)∘f + (-1)^{|g|} g∘d(f)``.
* ``d`` lowers degree by one, ``⋆ : Hom(a, b) → Hom(b, a)`` preserves it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactlin import SparseMatrix, Vector, scalar

Pair = Tuple[str, str]


class ShapeMismatch(ValueError):
    pass


class UnknownElement(KeyError):
    pass


@dataclass
class Violation:
    kind: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        w = ", ".join(map(str, self.witness))
        return f"{self.kind}({w}){': ' + self.detail if self.detail else ''}"


@dataclass
class CheckReport:
    name: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind, witness, detail=""):
        self.violations.append(Violation(kind, tuple(witness), detail))

    def __str__(self):
        if self.ok:
            return f"{self.name}: pass"
        lines = [f"{self.name}: FAIL ({len(self.violations)} violations)"]
        lines += [f"  {v}" for v in self.violations[:10]]
        return "\n".join(lines)


def _vec_str(v: Mapping[int, Fraction], names: Sequence[str]) -> str:
    if not v:
        return "0"
    return " + ".join(f"{c}*{names[i]}" for i, c in sorted(v.items()))


def _add(acc: Dict[int, Fraction], v: Mapping[int, Fraction], c=1) -> None:
    for i, x in v.items():
        y = acc.get(i, 0) + c * x
        if y:
            acc[i] = y
        else:
            acc.pop(i, None)


@dataclass(frozen=True)
class Element:
    """A vector in ``Hom(source, target)``."""

    source: str
    target: str
    coeffs: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {i: scalar(c) for i, c in self.coeffs.items() if c})


class InvolutiveCategory:
    """A finite-dimensional involutive DG category.

    ``homs[(a, b)]`` lists ``(name, degree)`` pairs for the basis of
    ``Hom(a, b)``.  ``compose[(a, b, c)][(i, j)]`` is the vector ``g_j∘f_i``
    in ``Hom(a, c)``.  ``diff[(a, b)]`` and ``star[(a, b)]`` are matrices
    acting on column vectors of coefficients.
    """

    def __init__(self, branes: Sequence[str], homs: Mapping[Pair, Sequence[Tuple[str, int]]],
                 compose: Mapping[Tuple[str, str, str], Mapping[Tuple[int, int], Mapping[int, Fraction]]],
                 units: Mapping[str, Mapping[int, Fraction]],
                 diff: Optional[Mapping[Pair, SparseMatrix]] = None,
                 star: Optional[Mapping[Pair, SparseMatrix]] = None):
        self.branes = tuple(branes)
        if len(set(self.branes)) != len(self.branes):
            raise ShapeMismatch("brane identifiers must be distinct")
        self.homs: Dict[Pair, Tuple[Tuple[str, int], ...]] = {}
        for a, b in product(self.branes, repeat=2):
            basis = tuple((str(n), int(d)) for n, d in homs.get((a, b), ()))
            if len({n for n, _ in basis}) != len(basis):
                raise ShapeMismatch(f"duplicate basis names in Hom({a},{b})")
            self.homs[(a, b)] = basis
        self.compose_table: Dict[Tuple[str, str, str], Dict[Tuple[int, int], Dict[int, Fraction]]] = {}
        for key, table in compose.items():
            a, b, c = key
            for (i, j), vec in table.items():
                if not (0 <= i < self.dim(a, b) and 0 <= j < self.dim(b, c)):
                    raise ShapeMismatch(f"composition index {(i, j)} out of range for {key}")
                vec = {k: scalar(x) for k, x in vec.items() if x}
                if any(not 0 <= k < self.dim(a, c) for k in vec):
                    raise ShapeMismatch(f"composition value out of range for {key}")
                if vec:
                    self.compose_table.setdefault(key, {})[(i, j)] = vec
        self.units = {a: {k: scalar(x) for k, x in units[a].items() if x} for a in self.branes}
        self.diff: Dict[Pair, SparseMatrix] = {}
        self.star: Dict[Pair, SparseMatrix] = {}
        for a, b in product(self.branes, repeat=2):
            n = self.dim(a, b)
            d = (diff or {}).get((a, b))
            if d is None:
                d = SparseMatrix.zero(n, n)
            if d.shape != (n, n):
                raise ShapeMismatch(f"differential on Hom({a},{b}) has shape {d.shape}")
            self.diff[(a, b)] = d
            s = (star or {}).get((a, b))
            if s is None:
                if star is not None and n:
                    raise ShapeMismatch(f"missing star matrix for Hom({a},{b})")
                s = SparseMatrix.zero(self.dim(b, a), n)
            if s.shape != (self.dim(b, a), n):
                raise ShapeMismatch(f"star on Hom({a},{b}) has shape {s.shape}")
            self.star[(a, b)] = s
        self._name_index = {}
        for (a, b), basis in self.homs.items():
            for i, (name, _) in enumerate(basis):
                self._name_index.setdefault(name, []).append((a, b, i))

    # basics -------------------------------------------------------------
    def dim(self, a: str, b: str) -> int:
        return len(self.homs[(a, b)])

    def degree(self, a: str, b: str, i: int) -> int:
        return self.homs[(a, b)][i][1]

    def names(self, a: str, b: str) -> List[str]:
        return [n for n, _ in self.homs[(a, b)]]

    def pairs(self) -> List[Pair]:
        return [(a, b) for a, b in product(self.branes, repeat=2)]

    def basis_element(self, name: str, source: Optional[str] = None, target: Optional[str] = None) -> Element:
        hits = [h for h in self._name_index.get(name, [])
                if (source is None or h[0] == source) and (target is None or h[1] == target)]
        if len(hits) != 1:
            raise UnknownElement(name)
        a, b, i = hits[0]
        return Element(a, b, {i: Fraction(1)})

    def unit(self, a: str) -> Element:
        return Element(a, a, self.units[a])

    # operations on coefficient vectors ------------------------------------
    def comp_basis(self, a: str, b: str, c: str, i: int, j: int) -> Dict[int, Fraction]:
        """Coefficients of ``g_j∘f_i`` for basis ``f_i ∈ Hom(a,b)``, ``g_j ∈ Hom(b,c)``."""
        return self.compose_table.get((a, b, c), {}).get((i, j), {})

    def comp_vec(self, a: str, b: str, c: str, f: Mapping[int, Fraction], g: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        table = self.compose_table.get((a, b, c), {})
        for i, x in f.items():
            for j, y in g.items():
                v = table.get((i, j))
                if v:
                    _add(out, v, x * y)
        return out

    def compose(self, f: Element, g: Element) -> Element:
        """``g∘f`` for ``f: a → b`` and ``g: b → c``."""
        if f.target != g.source:
            raise ShapeMismatch(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}")
        return Element(f.source, g.target, self.comp_vec(f.source, f.target, g.target, f.coeffs, g.coeffs))

    def d_vec(self, a: str, b: str, f: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        return self.diff[(a, b)].apply(f)

    def star_vec(self, a: str, b: str, f: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        return self.star[(a, b)].apply(f)

    def differential(self, f: Element) -> Element:
        return Element(f.source, f.target, self.d_vec(f.source, f.target, f.coeffs))

    def element_degree(self, f: Element) -> Optional[int]:
        degs = {self.degree(f.source, f.target, i) for i in f.coeffs}
        return degs.pop() if len(degs) == 1 else None


def apply_star(c: InvolutiveCategory, element: Element) -> Element:
    """Image of ``element`` under ⋆, landing in the reversed hom space."""
    if (element.source, element.target) not in c.homs:
        raise UnknownElement(element)
    n = c.dim(element.source, element.target)
    if any(not 0 <= i < n for i in element.coeffs):
        raise UnknownElement(element)
    return Element(element.target, element.source, c.star_vec(element.source, element.target, element.coeffs))


def check_dg_axioms(c: InvolutiveCategory) -> CheckReport:
    """Grading, d² = 0, Leibniz, associativity and unit laws on all basis tuples."""
    rep = CheckReport("dg_axioms")
    br = c.branes
    for (a, b, cc), table in c.compose_table.items():
        for (i, j), v in table.items():
            want = c.degree(a, b, i) + c.degree(b, cc, j)
            for k in v:
                if c.degree(a, cc, k) != want:
                    rep.add("degree", (c.homs[(a, b)][i][0], c.homs[(b, cc)][j][0]),
                            f"product lands in degree {c.degree(a, cc, k)}, expected {want}")
    for a, b in c.pairs():
        names = c.names(a, b)
        d = c.diff[(a, b)]
        for (k, i), _ in d.entries.items():
            if c.degree(a, b, k) != c.degree(a, b, i) - 1:
                rep.add("degree", (names[i],), "differential does not lower degree by one")
        dd = d @ d
        for (k, i), x in dd.entries.items():
            rep.add("d_squared", (names[i],), f"d(d({names[i]})) has {x} on {names[k]}")
    for a in br:
        u = c.units[a]
        if any(c.degree(a, a, k) != 0 for k in u):
            rep.add("unit", (a,), "unit is not of degree 0")
        if c.d_vec(a, a, u):
            rep.add("unit", (a,), "d(1) ≠ 0")
    for a, b in c.pairs():
        for i in range(c.dim(a, b)):
            e = {i: Fraction(1)}
            lhs = c.comp_vec(a, a, b, c.units[a], e)
            if lhs != e:
                rep.add("unit", (c.names(a, b)[i], f"1_{a}"), f"f∘1 = {_vec_str(lhs, c.names(a, b))}")
            rhs = c.comp_vec(a, b, b, e, c.units[b])
            if rhs != e:
                rep.add("unit", (f"1_{b}", c.names(a, b)[i]), f"1∘f = {_vec_str(rhs, c.names(a, b))}")
    for a, b, cc in product(br, repeat=3):
        for i, j in product(range(c.dim(a, b)), range(c.dim(b, cc))):
            f, g = {i: Fraction(1)}, {j: Fraction(1)}
            gf = c.comp_vec(a, b, cc, f, g)
            lhs = c.d_vec(a, cc, gf)
            rhs = c.comp_vec(a, b, cc, f, c.d_vec(b, cc, g))
            sign = -1 if c.degree(b, cc, j) % 2 else 1
            _add(rhs, c.comp_vec(a, b, cc, c.d_vec(a, b, f), g), sign)
            if lhs != rhs:
                names = c.names(a, cc)
                rep.add("leibniz", (c.names(a, b)[i], c.names(b, cc)[j]),
                        f"{_vec_str(lhs, names)} != {_vec_str(rhs, names)}")
    for a, b, cc, dd in product(br, repeat=4):
        if not (c.dim(a, b) and c.dim(b, cc) and c.dim(cc, dd)):
            continue
        for i, j, k in product(range(c.dim(a, b)), range(c.dim(b, cc)), range(c.dim(cc, dd))):
            f, g, h = {i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)}
            left = c.comp_vec(a, cc, dd, c.comp_vec(a, b, cc, f, g), h)
            right = c.comp_vec(a, b, dd, f, c.comp_vec(b, cc, dd, g, h))
            if left != right:
                names = c.names(a, dd)
                rep.add("associativity", (c.names(a, b)[i], c.names(b, cc)[j], c.names(cc, dd)[k]),
                        f"h∘(g∘f) = {_vec_str(left, names)} but (h∘g)∘f = {_vec_str(right, names)}")
    return rep


def check_involution_axioms(c: InvolutiveCategory) -> CheckReport:
    """Anti-homomorphism, involutivity, unit fixing and d-compatibility of ⋆."""
    rep = CheckReport("involution_axioms")
    for a, b in c.pairs():
        s = c.star[(a, b)]
        names = c.names(a, b)
        for (k, i), _ in s.entries.items():
            if c.degree(b, a, k) != c.degree(a, b, i):
                rep.add("degree", (names[i],), "star does not preserve degree")
        back = c.star[(b, a)] @ s
        if back != SparseMatrix.identity(c.dim(a, b)):
            for i in range(c.dim(a, b)):
                v = back.column(i)
                if v != {i: Fraction(1)}:
                    rep.add("involutive", (names[i],), f"(f⋆)⋆ = {_vec_str(v, names)}")
        if c.diff[(b, a)] @ s != s @ c.diff[(a, b)]:
            lhs, rhs = c.diff[(b, a)] @ s, s @ c.diff[(a, b)]
            for i in range(c.dim(a, b)):
                if lhs.column(i) != rhs.column(i):
                    rep.add("d_compat", (names[i],), "d(f⋆) ≠ (d f)⋆")
    for a in c.branes:
        u = c.units[a]
        su = c.star_vec(a, a, u)
        if su != u:
            rep.add("unit_fixed", (f"1_{a}",), f"1⋆ = {_vec_str(su, c.names(a, a))}")
    for a, b, cc in product(c.branes, repeat=3):
        for i, j in product(range(c.dim(a, b)), range(c.dim(b, cc))):
            f, g = {i: Fraction(1)}, {j: Fraction(1)}
            lhs = c.star_vec(a, cc, c.comp_vec(a, b, cc, f, g))
            rhs = c.comp_vec(cc, b, a, c.star_vec(b, cc, g), c.star_vec(a, b, f))
            if (c.degree(a, b, i) * c.degree(b, cc, j)) % 2:
                rhs = {k: -x for k, x in rhs.items()}
            if lhs != rhs:
                names = c.names(cc, a)
                rep.add("anti_homomorphism", (c.names(a, b)[i], c.names(b, cc)[j]),
                        f"(g∘f)⋆ = {_vec_str(lhs, names)} but f⋆∘g⋆ = {_vec_str(rhs, names)}")
    return rep
