"""Involutive A∞-categories given by structure constants, plus Calabi-Yau data.

``products[n]`` maps an object path ``(c_1, …, c_{n+1})`` and a tuple of
basis indices ``(i_1, …, i_n)`` (with ``i_k`` indexing ``Hom(c_k, c_{k+1})``)
to a coefficient vector in ``Hom(c_1, c_{n+1})``.  Tensor words are read in
path order, so ``m_2(f, g)`` composes ``f`` first.

Koszul signs: applying ``Id^{⊗i} ⊗ m_j ⊗ Id^{⊗l}`` to a word costs
``(-1)^{(j-2)(|f_1|+…+|f_i|)}``; reversing a word under ⋆ costs
``(-1)^{Σ_{p<q} |f_p||f_q|}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exactlin import SparseMatrix, rank
from .invcat import (CheckReport, InvolutiveCategory, ShapeMismatch, _add,
                     _vec_str, check_dg_axioms, check_involution_axioms)

Path = Tuple[str, ...]
Word = Tuple[int, ...]


def reversal_sign(degrees: Sequence[int]) -> int:
    odd = sum(1 for d in degrees if d % 2)
    return -1 if (odd * (odd - 1) // 2) % 2 else 1


class AInfinityCategory:
    def __init__(self, branes: Sequence[str], homs: Mapping[Tuple[str, str], Sequence[Tuple[str, int]]],
                 products: Mapping[int, Mapping[Path, Mapping[Word, Mapping[int, Fraction]]]],
                 units: Mapping[str, Mapping[int, Fraction]],
                 star: Mapping[Tuple[str, str], SparseMatrix], n_max: int):
        if n_max < 1:
            raise ValueError("n_max must be at least 1")
        self.branes = tuple(branes)
        self.homs = {(a, b): tuple(homs.get((a, b), ())) for a, b in product(self.branes, repeat=2)}
        self.n_max = n_max
        self.units = {a: dict(units[a]) for a in self.branes}
        self.star = dict(star)
        self.products: Dict[int, Dict[Path, Dict[Word, Dict[int, Fraction]]]] = {}
        for n, table in products.items():
            for path, entries in table.items():
                if len(path) != n + 1:
                    raise ShapeMismatch(f"m_{n} keyed by path of length {len(path)}")
                for word, vec in entries.items():
                    if len(word) != n or any(not 0 <= w < self.dim(path[k], path[k + 1])
                                             for k, w in enumerate(word)):
                        raise ShapeMismatch(f"m_{n} word {word} out of range on path {path}")
                    if any(not 0 <= k < self.dim(path[0], path[-1]) for k in vec):
                        raise ShapeMismatch(f"m_{n} value out of range on path {path}")
                    vec = {k: Fraction(x) for k, x in vec.items() if x}
                    if vec and n <= n_max:
                        self.products.setdefault(n, {}).setdefault(tuple(path), {})[tuple(word)] = vec

    def dim(self, a: str, b: str) -> int:
        return len(self.homs[(a, b)])

    def degree(self, a: str, b: str, i: int) -> int:
        return self.homs[(a, b)][i][1]

    def names(self, a: str, b: str) -> List[str]:
        return [n for n, _ in self.homs[(a, b)]]

    def m(self, path: Path, word: Word) -> Dict[int, Fraction]:
        """``m_n`` on a basis word along ``path``."""
        n = len(word)
        if n > self.n_max:
            return {}
        return self.products.get(n, {}).get(tuple(path), {}).get(tuple(word), {})

    def m_vec(self, path: Path, vecs: Sequence[Mapping[int, Fraction]]) -> Dict[int, Fraction]:
        """Multilinear extension of :meth:`m` to coefficient vectors."""
        out: Dict[int, Fraction] = {}
        for items in product(*[list(v.items()) for v in vecs]):
            coeff = Fraction(1)
            for _, c in items:
                coeff *= c
            _add(out, self.m(path, tuple(i for i, _ in items)), coeff)
        return out

    def star_vec(self, a: str, b: str, v: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        return self.star[(a, b)].apply(v)

    def paths(self, n: int) -> Iterator[Path]:
        """Object paths of length ``n + 1`` whose hom spaces are all nonzero."""
        for path in product(self.branes, repeat=n + 1):
            if all(self.dim(path[k], path[k + 1]) for k in range(n)):
                yield path

    def words(self, path: Path) -> Iterator[Word]:
        return product(*[range(self.dim(path[k], path[k + 1])) for k in range(len(path) - 1)])

    def word_degrees(self, path: Path, word: Word) -> List[int]:
        return [self.degree(path[k], path[k + 1], w) for k, w in enumerate(word)]


@dataclass
class CalabiYauData:
    """``trace[e]`` is a linear functional on ``Hom(e, e)`` given by coefficients."""

    trace: Mapping[str, Mapping[int, Fraction]]
    degree: int = 0

    def tr(self, e: str, v: Mapping[int, Fraction]) -> Fraction:
        t = self.trace.get(e, {})
        return sum((t.get(i, 0) * x for i, x in v.items()), Fraction(0))


def from_dg(c: InvolutiveCategory, n_max: int = 2) -> AInfinityCategory:
    """``m_1 = d``, ``m_2(f, g) = (-1)^{|f||g|} g∘f``, higher products zero."""
    products: Dict[int, Dict[Path, Dict[Word, Dict[int, Fraction]]]] = {1: {}, 2: {}}
    for a, b in c.pairs():
        for i, col in enumerate(c.diff[(a, b)].columns()):
            if col:
                products[1].setdefault((a, b), {})[(i,)] = col
    for (a, b, cc), table in c.compose_table.items():
        for (i, j), vec in table.items():
            s = -1 if (c.degree(a, b, i) * c.degree(b, cc, j)) % 2 else 1
            products[2].setdefault((a, b, cc), {})[(i, j)] = {k: s * x for k, x in vec.items()}
    return AInfinityCategory(c.branes, c.homs, products, c.units, c.star, max(n_max, 2))


def _m_residual(c: AInfinityCategory, path: Path, word: Word) -> Dict[int, Fraction]:
    n = len(word)
    degs = c.word_degrees(path, word)
    out: Dict[int, Fraction] = {}
    for j in range(1, n + 1):
        if j > c.n_max:
            break
        for i in range(0, n - j + 1):
            l = n - i - j
            if i + 1 + l > c.n_max:
                continue
            inner = c.m(path[i:i + j + 1], word[i:i + j])
            if not inner:
                continue
            sign = -1 if (i + j * l) % 2 else 1
            if (j - 2) * sum(degs[:i]) % 2:
                sign = -sign
            outer_path = path[:i + 1] + path[i + j:]
            for k, x in inner.items():
                outer_word = word[:i] + (k,) + word[i + j:]
                _add(out, c.m(outer_path, outer_word), sign * x)
    return out


def check_ainfty_relations(c: AInfinityCategory) -> CheckReport:
    """Degree, unit and A∞-relation checks on every basis word.

    Relations are checked up to arity ``2 n_max - 1``, past which every
    term vanishes under truncation.
    """
    rep = CheckReport("ainfty_relations")
    for n, table in c.products.items():
        for path, entries in table.items():
            for word, vec in entries.items():
                want = sum(c.word_degrees(path, word)) + n - 2
                if any(c.degree(path[0], path[-1], k) != want for k in vec):
                    rep.add("degree", (n, path, word), f"m_{n} does not have degree {n - 2}")
    for a, b in [(a, b) for a in c.branes for b in c.branes]:
        for i in range(c.dim(a, b)):
            e = {i: Fraction(1)}
            if c.m_vec((a, a, b), [c.units[a], e]) != e:
                rep.add("unit", (2, (a, a, b), ("1", c.names(a, b)[i])), "m_2(1, f) ≠ f")
            if c.m_vec((a, b, b), [e, c.units[b]]) != e:
                rep.add("unit", (2, (a, b, b), (c.names(a, b)[i], "1")), "m_2(f, 1) ≠ f")
    for n in range(3, c.n_max + 1):
        for path in c.paths(n):
            for pos in range(n):
                if path[pos] != path[pos + 1]:
                    continue
                u = c.units[path[pos]]
                others = [range(c.dim(path[k], path[k + 1])) for k in range(n)]
                for word in product(*others):
                    vecs = [{w: Fraction(1)} for w in word]
                    vecs[pos] = u
                    if c.m_vec(path, vecs):
                        rep.add("unit", (n, path, pos), f"m_{n} does not vanish on a unit")
                        break
    for n in range(1, 2 * c.n_max):
        for path in c.paths(n):
            for word in c.words(path):
                res = _m_residual(c, path, word)
                if res:
                    rep.add("relation", (n, path, word), _vec_str(res, c.names(path[0], path[-1])))
    return rep


def check_involution_compatibility(c: AInfinityCategory) -> CheckReport:
    """``m_n(f_1, …, f_n)⋆ = ± m_n(f_n⋆, …, f_1⋆)`` on all basis words."""
    rep = CheckReport("involution_compatibility")
    for n in range(1, c.n_max + 1):
        for path in c.paths(n):
            rpath = tuple(reversed(path))
            for word in c.words(path):
                lhs = c.star_vec(path[0], path[-1], c.m(path, word))
                stars = [c.star_vec(path[k], path[k + 1], {w: Fraction(1)}) for k, w in enumerate(word)]
                rhs = c.m_vec(rpath, list(reversed(stars)))
                if reversal_sign(c.word_degrees(path, word)) < 0:
                    rhs = {k: -x for k, x in rhs.items()}
                if lhs != rhs:
                    names = c.names(path[-1], path[0])
                    rep.add("star", (n, path, word), f"{_vec_str(lhs, names)} != {_vec_str(rhs, names)}")
    return rep


def pairing(c: AInfinityCategory, cy: CalabiYauData, a: str, b: str,
            f: Mapping[int, Fraction], g: Mapping[int, Fraction]) -> Fraction:
    """``⟨f, g⟩ = Tr(g∘f)`` for ``f ∈ Hom(a, b)``, ``g ∈ Hom(b, a)``."""
    gf: Dict[int, Fraction] = {}
    for (i, x), (j, y) in product(f.items(), g.items()):
        v = c.m((a, b, a), (i, j))
        if v:
            s = -1 if (c.degree(a, b, i) * c.degree(b, a, j)) % 2 else 1
            _add(gf, v, s * x * y)
    return cy.tr(a, gf)


def pairing_matrix(c: AInfinityCategory, cy: CalabiYauData, a: str, b: str) -> SparseMatrix:
    rows = []
    for i in range(c.dim(a, b)):
        rows.append({j: pairing(c, cy, a, b, {i: Fraction(1)}, {j: Fraction(1)}) for j in range(c.dim(b, a))})
    return SparseMatrix.from_rows(c.dim(b, a), rows) if rows else SparseMatrix.zero(0, c.dim(b, a))


def homology_representatives(c: AInfinityCategory, a: str, b: str) -> List[Dict[int, Fraction]]:
    """Cycles of ``(Hom(a, b), m_1)`` whose classes form a basis of homology."""
    from .exactlin import _rref_rows, kernel_basis
    n = c.dim(a, b)
    d = SparseMatrix.from_columns(n, [c.m((a, b), (i,)) for i in range(n)]) if n else SparseMatrix.zero(0, 0)
    boundaries = [col for col in d.columns() if col]
    cycles = kernel_basis(d)
    reps = []
    span = list(boundaries)
    current = len(_rref_rows(span)[1])
    for z in cycles:
        r = len(_rref_rows(span + [z])[1])
        if r > current:
            reps.append(z)
            span.append(z)
            current = r
    return reps


def check_calabi_yau(c: AInfinityCategory, cy: CalabiYauData) -> CheckReport:
    rep = CheckReport("calabi_yau")
    for e in c.branes:
        for i in range(c.dim(e, e)):
            v = {i: Fraction(1)}
            if cy.tr(e, c.star_vec(e, e, v)) != cy.tr(e, v):
                rep.add("trace_star", (e, c.names(e, e)[i]), "Tr(f⋆) ≠ Tr(f)")
    for a, b in [(a, b) for a in c.branes for b in c.branes]:
        for i, j in product(range(c.dim(a, b)), range(c.dim(b, a))):
            f, g = {i: Fraction(1)}, {j: Fraction(1)}
            koszul = -1 if (c.degree(a, b, i) * c.degree(b, a, j)) % 2 else 1
            lhs = pairing(c, cy, a, b, f, g)
            sym = pairing(c, cy, b, a, g, f)
            if lhs != koszul * sym:
                rep.add("symmetry", (c.names(a, b)[i], c.names(b, a)[j]), f"{lhs} != {koszul * sym}")
            tw = pairing(c, cy, a, b, c.star_vec(b, a, g), c.star_vec(a, b, f))
            if lhs != koszul * tw:
                rep.add("twisted_involutive", (c.names(a, b)[i], c.names(b, a)[j]),
                        f"<f,g> = {lhs} but <g⋆,f⋆> = {tw}")
    for a, b in [(a, b) for a in c.branes for b in c.branes]:
        if (b, a) < (a, b):
            continue
        hab = homology_representatives(c, a, b)
        hba = homology_representatives(c, b, a)
        if not hab and not hba:
            continue
        rows = [{j: pairing(c, cy, a, b, z, w) for j, w in enumerate(hba)} for z in hab]
        p = SparseMatrix.from_rows(len(hba), rows) if rows else SparseMatrix.zero(0, len(hba))
        r = rank(p)
        if not (r == len(hab) == len(hba)):
            rep.add("degenerate_pairing", (a, b),
                    f"pairing on homology has rank {r}, dims {len(hab)} and {len(hba)}")
    for n in range(2, c.n_max + 2):
        for path in c.paths(n - 1):
            for last in range(c.dim(path[-1], path[0])):
                for word in c.words(path):
                    full = tuple(word) + (last,)
                    fpath = tuple(path) + (path[0],)
                    degs = c.word_degrees(fpath, full)
                    lhs = pairing(c, cy, path[0], path[-1], c.m(path, word), {last: Fraction(1)})
                    inner = c.m(fpath[1:], full[1:])
                    rhs = pairing(c, cy, fpath[1], fpath[0], inner, {full[0]: Fraction(1)})
                    sign = (n + 1) + degs[0] * sum(degs[1:])
                    if sign % 2:
                        rhs = -rhs
                    if lhs != rhs:
                        rep.add("cyclic", (n, fpath, full), f"{lhs} != {rhs}")
    return rep
