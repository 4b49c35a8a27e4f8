"""Truncated Hochschild complexes of involutive DG categories.

A chain is a cyclic word ``f_0 ⊗ … ⊗ f_{n-1}`` with ``f_i ∈ Hom(a_i, a_{i+1})``
(indices mod n), sitting in chain degree ``Σ|f_i| + n - 1``.  On words of
internal degree zero the differential is

    d(f_0⊗…⊗f_{n-1}) = Σ_{i<n-1} (-1)^i f_0⊗…⊗(f_{i+1}∘f_i)⊗…
                       + (-1)^{n-1} (f_0∘f_{n-1})⊗f_1⊗…⊗f_{n-2}.

For graded input the products go through ``m_2(f, g) = (-1)^{|f||g|} g∘f``
and the signs are the Koszul signs of the suspended entries, which reduces to
the formula above in degree zero.

The involutive complex identifies a word with its reflection

    ρ(f_0⊗f_1⊗…⊗f_{n-1}) = ε · f_0⋆ ⊗ f_{n-1}⋆ ⊗ … ⊗ f_1⋆,

``ε`` being the Koszul sign of reversing the suspended tail times ``(-1)^{n-1}``
(so ``(-1)^{k(k+1)/2}`` with ``k = n-1`` in degree zero).  ρ commutes with
``d`` and is the chain-level involution.  The normalized complex further kills
words carrying a unit in some slot ``i > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .exactlin import FiniteComplex, Quotient, SparseMatrix, homology_dims, quotient_presentation, rank
from .invcat import InvolutiveCategory

Poly = Dict["CyclicWord", Fraction]


class DescentFailure(RuntimeError):
    """The differential does not preserve the relation subspace."""


class CyclicWord(NamedTuple):
    """Basis chain: ``path[i]`` is the source of ``maps[i]`` (a basis index)."""

    path: Tuple[str, ...]
    maps: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.path)

    def hom(self, i: int) -> Tuple[str, str]:
        n = len(self.path)
        return self.path[i % n], self.path[(i + 1) % n]

    def validate(self, c: InvolutiveCategory) -> None:
        if not self.path or len(self.path) != len(self.maps):
            raise ValueError("cyclic word needs matching nonempty path and maps")
        for i, w in enumerate(self.maps):
            a, b = self.hom(i)
            if not 0 <= w < c.dim(a, b):
                raise ValueError(f"slot {i}: no basis element {w} in Hom({a},{b})")

    def show(self, c: InvolutiveCategory) -> str:
        return "⊗".join(c.names(*self.hom(i))[w] for i, w in enumerate(self.maps))


# enumeration and degrees ---------------------------------------------------

def cyclic_words(c: InvolutiveCategory, n: int) -> List[CyclicWord]:
    out = []
    for path in product(c.branes, repeat=n):
        dims = [c.dim(path[i], path[(i + 1) % n]) for i in range(n)]
        if all(dims):
            out.extend(CyclicWord(path, w) for w in product(*[range(d) for d in dims]))
    return out


def word_degrees(c: InvolutiveCategory, w: CyclicWord) -> List[int]:
    return [c.degree(*w.hom(i), k) for i, k in enumerate(w.maps)]


def chain_degree(c: InvolutiveCategory, w: CyclicWord) -> int:
    return sum(word_degrees(c, w)) + w.length - 1


def _odd(e: int) -> int:
    return -1 if e % 2 else 1


def _expand(path, slots: Sequence[Mapping[int, Fraction]], coeff, out: Poly) -> None:
    """Add ``coeff · slot_0 ⊗ … ⊗ slot_{n-1}`` (multilinear) into ``out``."""
    for items in product(*[list(s.items()) for s in slots]):
        x = Fraction(coeff)
        for _, y in items:
            x *= y
        if x:
            key = CyclicWord(tuple(path), tuple(i for i, _ in items))
            v = out.get(key, 0) + x
            if v:
                out[key] = v
            else:
                del out[key]


def _m2(c: InvolutiveCategory, a, b, cc, i, j) -> Dict[int, Fraction]:
    v = c.comp_basis(a, b, cc, i, j)
    if c.degree(a, b, i) * c.degree(b, cc, j) % 2:
        return {k: -x for k, x in v.items()}
    return dict(v)


# differential and involution on basis words ---------------------------------

def hochschild_d(c: InvolutiveCategory, w: CyclicWord) -> Poly:
    path, word = w
    n = len(path)
    degs = word_degrees(c, w)
    sh = [d + 1 for d in degs]
    unit_slots = [{k: Fraction(1)} for k in word]
    out: Poly = {}
    for i in range(n):
        dv = c.d_vec(*w.hom(i), {word[i]: Fraction(1)})
        if dv:
            slots = list(unit_slots)
            slots[i] = dv
            _expand(path, slots, -_odd(sum(sh[:i])), out)
    for i in range(n - 1):
        pv = _m2(c, path[i], path[i + 1], path[(i + 2) % n], word[i], word[i + 1])
        if pv:
            slots = unit_slots[:i] + [pv] + unit_slots[i + 2:]
            _expand(path[:i + 1] + path[i + 2:], slots, _odd(sum(sh[:i]) + degs[i]), out)
    if n >= 2:
        pv = _m2(c, path[n - 1], path[0], path[1], word[n - 1], word[0])
        if pv:
            e = sh[n - 1] * sum(sh[:n - 1]) + degs[n - 1]
            _expand((path[n - 1],) + path[1:n - 1], [pv] + unit_slots[1:n - 1], _odd(e), out)
    return out


def reflection_sign(c: InvolutiveCategory, w: CyclicWord) -> int:
    odd = sum(1 for d in word_degrees(c, w)[1:] if d % 2 == 0)  # suspended tail parity
    return _odd(odd * (odd - 1) // 2 + w.length - 1)


def chain_involution(c: InvolutiveCategory, w) -> Poly:
    """``ρ`` on a basis word or on a linear combination of words."""
    if not isinstance(w, CyclicWord):
        out: Poly = {}
        for k, v in w.items():
            for k2, v2 in chain_involution(c, k).items():
                out[k2] = out.get(k2, 0) + v * v2
        return {k: v for k, v in out.items() if v}
    path, word = w
    n = len(path)
    order = [0] + list(range(n - 1, 0, -1))
    slots = [c.star_vec(*w.hom(i), {word[i]: Fraction(1)}) for i in order]
    new_path = (path[1 % n], path[0]) + tuple(path[i] for i in range(n - 1, 1, -1)) if n > 1 else path
    out = {}
    _expand(new_path, slots, reflection_sign(c, w), out)
    return out


def unit_insertions(c: InvolutiveCategory, n: int) -> List[Poly]:
    """Words of length ``n`` with a unit in some slot ``i > 0``, expanded in the basis."""
    out = []
    for path in product(c.branes, repeat=n):
        dims = [c.dim(path[i], path[(i + 1) % n]) for i in range(n)]
        if not all(dims):
            continue
        for i in range(1, n):
            if path[i] != path[(i + 1) % n]:
                continue
            u = c.units[path[i]]
            ranges = [range(d) for d in dims]
            ranges[i] = [None]
            for rest in product(*ranges):
                slots = [{k: Fraction(1)} if k is not None else dict(u) for k in rest]
                v: Poly = {}
                _expand(path, slots, 1, v)
                if v:
                    out.append(v)
    return out


# truncated complexes ---------------------------------------------------------

@dataclass
class TruncatedComplex:
    """A word-length truncated Hochschild complex, possibly a quotient.

    ``words[k]`` lists the ambient basis words of degree ``k``; ``quotients[k]``
    presents chain group ``k`` as a quotient of their span, and ``basis[k]``
    are the representative words of the quotient coordinates.
    """

    category: InvolutiveCategory
    trunc: int
    variant: str
    words: Dict[int, List[CyclicWord]]
    quotients: Dict[int, Quotient]
    underlying: FiniteComplex
    involution: Dict[int, SparseMatrix] = field(default_factory=dict)

    @property
    def basis(self) -> Dict[int, List[CyclicWord]]:
        return {k: [self.words[k][j] for j in q.representatives] for k, q in self.quotients.items()}

    @property
    def basis_index(self) -> Dict[CyclicWord, Tuple[int, int]]:
        return {w: (k, i) for k, ws in self.basis.items() for i, w in enumerate(ws)}

    def dims(self) -> Dict[int, int]:
        return {k: q.dim for k, q in sorted(self.quotients.items())}

    def d(self, k: int) -> SparseMatrix:
        return self.underlying.d(k)

    def coords(self, poly: Mapping[CyclicWord, Fraction]) -> Dict[int, Dict[int, Fraction]]:
        """Quotient coordinates of a chain, split by degree."""
        amb: Dict[int, Dict[int, Fraction]] = {}
        idx = self._ambient_index()
        for w, v in poly.items():
            if w not in idx:
                raise ValueError(f"word {w} lies outside the truncation")
            k, j = idx[w]
            amb.setdefault(k, {})[j] = amb.get(k, {}).get(j, 0) + v
        return {k: self.quotients[k].project(v) for k, v in amb.items()}

    def _ambient_index(self):
        if not hasattr(self, "_aidx"):
            self._aidx = {w: (k, j) for k, ws in self.words.items() for j, w in enumerate(ws)}
        return self._aidx


def _ambient(c: InvolutiveCategory, trunc: int):
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    words: Dict[int, List[CyclicWord]] = {}
    for n in range(1, trunc + 1):
        for w in cyclic_words(c, n):
            words.setdefault(chain_degree(c, w), []).append(w)
    index = {w: (k, j) for k, ws in words.items() for j, w in enumerate(ws)}
    return words, index


def _poly_vectors(poly: Mapping[CyclicWord, Fraction], index) -> Dict[int, Dict[int, Fraction]]:
    out: Dict[int, Dict[int, Fraction]] = {}
    for w, v in poly.items():
        k, j = index[w]
        out.setdefault(k, {})[j] = v
    return out


def _operator(words, index, f, shift: int) -> Dict[int, SparseMatrix]:
    """Matrices of a linear map of degree ``shift`` defined on basis words."""
    mats = {}
    for k, ws in words.items():
        tgt = len(words.get(k + shift, []))
        ent = {}
        for j, w in enumerate(ws):
            for kk, vec in _poly_vectors(f(w), index).items():
                if kk != k + shift:
                    raise ValueError(f"operator does not have degree {shift}")
                for i, x in vec.items():
                    ent[(i, j)] = x
        mats[k] = SparseMatrix(tgt, len(ws), ent)
    return mats


def ambient_operators(c: InvolutiveCategory, trunc: int):
    """Words by degree with the matrices of ``d`` and ``ρ`` on their full span."""
    words, index = _ambient(c, trunc)
    dmat = _operator(words, index, lambda w: hochschild_d(c, w), -1)
    rho = _operator(words, index, lambda w: chain_involution(c, w), 0)
    return words, index, dmat, rho


def _build(c: InvolutiveCategory, trunc: int, variant: str) -> TruncatedComplex:
    words, index, dmat, rho = ambient_operators(c, trunc)
    rels: Dict[int, List[Dict[int, Fraction]]] = {k: [] for k in words}
    if variant in ("involutive", "normalized"):
        for k, ws in words.items():
            for j in range(len(ws)):
                v = dict(rho[k].column(j))
                v[j] = v.get(j, 0) - 1
                v = {i: x for i, x in v.items() if x}
                if v:
                    rels[k].append(v)
    if variant == "normalized":
        for n in range(2, trunc + 1):
            for poly in unit_insertions(c, n):
                for k, v in _poly_vectors(poly, index).items():
                    rels[k].append(v)
    quots = {k: quotient_presentation(len(ws), rels[k]) for k, ws in words.items()}
    diffs = {}
    for k in words:
        if k - 1 not in words:
            continue
        q, q1 = quots[k], quots[k - 1]
        for r in rels[k]:
            if q1.project(dmat[k].apply(r)):
                w = words[k][min(r)]
                raise DescentFailure(f"d does not preserve relations in degree {k}, near {w.show(c)}")
        diffs[k] = q1.projection @ dmat[k] @ q.section
    dims = {k: q.dim for k, q in quots.items()}
    inv = {k: quots[k].projection @ rho[k] @ quots[k].section for k in words}
    return TruncatedComplex(c, trunc, variant, words, quots, FiniteComplex(dims, diffs), inv)


def build_ordinary(a: InvolutiveCategory, trunc: int) -> TruncatedComplex:
    return _build(a, trunc, "ordinary")


def build_involutive(a: InvolutiveCategory, trunc: int) -> TruncatedComplex:
    return _build(a, trunc, "involutive")


def build_normalized_involutive(a: InvolutiveCategory, trunc: int) -> TruncatedComplex:
    return _build(a, trunc, "normalized")


BUILDERS = {"ordinary": build_ordinary, "involutive": build_involutive,
            "normalized": build_normalized_involutive}


def quotient_map(src: TruncatedComplex, dst: TruncatedComplex, k: int) -> SparseMatrix:
    """The projection ``src_k → dst_k`` between two variants over the same words."""
    return dst.quotients[k].projection @ src.quotients[k].section


# homology ---------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyRow:
    degree: int
    chain_dim: int
    rank_d: int
    dim: int
    reliable: bool


def homology(c: TruncatedComplex, max_reliable_degree: Optional[int] = None) -> Dict[int, HomologyRow]:
    """Homology per degree, flagging degrees outside the truncation-safe window.

    Boundaries into degree ``k`` come from words of length at most ``k + 2``
    (for internal degree zero), so only ``k ≤ trunc - 2`` is trusted.
    """
    window = c.trunc - 2
    if max_reliable_degree is None:
        max_reliable_degree = window
    limit = min(max_reliable_degree, window)
    hd = homology_dims(c.underlying)
    rows = {}
    for k in sorted(hd):
        rows[k] = HomologyRow(k, c.underlying.dim(k), rank(c.d(k)), hd[k], 0 <= k <= limit)
    return rows


def format_report(tables: Mapping[str, Mapping[int, HomologyRow]], fmt: str = "text") -> str:
    names = list(tables)
    degrees = sorted({k for t in tables.values() for k in t})
    lines = []
    if fmt == "rows":
        lines.append("variant,degree,chain_dim,rank_d,homology,reliable")
        for nm in names:
            for k in degrees:
                r = tables[nm].get(k)
                if r:
                    lines.append(f"{nm},{k},{r.chain_dim},{r.rank_d},{r.dim},{int(r.reliable)}")
        return "\n".join(lines)
    head = "deg  " + "  ".join(f"{nm:>22}" for nm in names)
    lines.append(head)
    lines.append(" " * 5 + "  ".join(f"{'chain rank H':>22}" for _ in names))
    for k in degrees:
        cells = []
        for nm in names:
            r = tables[nm].get(k)
            if r is None:
                cells.append(" " * 22)
            else:
                flag = " " if r.reliable else "?"
                cells.append(f"{r.chain_dim:>9} {r.rank_d:>5} {r.dim:>4}{flag}")
        lines.append(f"{k:>3}  " + "  ".join(f"{x:>22}" for x in cells))
    lines.append("? = outside the reliable window")
    return "\n".join(lines)
