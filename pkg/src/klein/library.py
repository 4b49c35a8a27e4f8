"""Small named categories used as bundled examples and as fuzzing seeds."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ainfty import CalabiYauData
from .exactlin import SparseMatrix
from .invcat import InvolutiveCategory

F = Fraction


def one_object(names: Sequence[str], mult: Mapping[Tuple[int, int], Mapping[int, Fraction]],
               unit: Mapping[int, Fraction], star: Optional[Sequence[Sequence]] = None,
               degrees: Optional[Sequence[int]] = None, diff: Optional[Sequence[Sequence]] = None,
               brane: str = "a") -> InvolutiveCategory:
    """An algebra viewed as a one-object category; ``mult[(i, j)] = e_j∘e_i``."""
    degrees = degrees or [0] * len(names)
    homs = {(brane, brane): list(zip(names, degrees))}
    n = len(names)
    st = SparseMatrix.from_dense(star) if star is not None else SparseMatrix.identity(n)
    df = {(brane, brane): SparseMatrix.from_dense(diff)} if diff is not None else None
    return InvolutiveCategory([brane], homs, {(brane, brane, brane): mult}, {brane: unit},
                              diff=df, star={(brane, brane): st})


def ground_field() -> Tuple[InvolutiveCategory, CalabiYauData]:
    c = one_object(["1"], {(0, 0): {0: F(1)}}, {0: F(1)})
    return c, CalabiYauData({"a": {0: F(1)}})


def group_algebra_z2() -> Tuple[InvolutiveCategory, CalabiYauData]:
    """K[Z/2] with basis {1, s}, trivial involution, Tr(a + b s) = a."""
    mult = {(0, 0): {0: F(1)}, (0, 1): {1: F(1)}, (1, 0): {1: F(1)}, (1, 1): {0: F(1)}}
    c = one_object(["1", "s"], mult, {0: F(1)})
    return c, CalabiYauData({"a": {0: F(1)}})


def group_algebra_cyclic(n: int) -> Tuple[InvolutiveCategory, CalabiYauData]:
    """K[Z/n] with ⋆(g) = g^{-1} and Tr the coefficient of the identity."""
    names = ["1"] + [f"g{k}" for k in range(1, n)]
    mult = {(i, j): {(i + j) % n: F(1)} for i in range(n) for j in range(n)}
    star = [[1 if (i + j) % n == 0 else 0 for j in range(n)] for i in range(n)]
    c = one_object(names, mult, {0: F(1)}, star=star)
    return c, CalabiYauData({"a": {0: F(1)}})


def _matrix_units(k: int):
    names = [f"E{i + 1}{j + 1}" for i in range(k) for j in range(k)]
    idx = {(i, j): i * k + j for i in range(k) for j in range(k)}
    mult = {}
    # f = E_ij then g = E_pq gives g∘f = E_pq E_ij = δ_qi E_pj
    for (i, j), (p, q) in product(idx, repeat=2):
        if q == i:
            mult[(idx[(i, j)], idx[(p, q)])] = {idx[(p, j)]: F(1)}
    star = [[0] * (k * k) for _ in range(k * k)]
    for (i, j), col in idx.items():
        star[idx[(j, i)]][col] = 1
    unit = {idx[(i, i)]: F(1) for i in range(k)}
    trace = {idx[(i, i)]: F(1) for i in range(k)}
    return names, mult, star, unit, trace


def matrix_algebra(k: int = 2) -> Tuple[InvolutiveCategory, CalabiYauData]:
    """M_k(K) with matrix trace and transpose."""
    names, mult, star, unit, trace = _matrix_units(k)
    c = one_object(names, mult, unit, star=star)
    return c, CalabiYauData({"a": trace})


def matrix_category(k: int = 2) -> Tuple[InvolutiveCategory, CalabiYauData]:
    """M_k(K) spread over k objects: Hom(i, j) = K·E_ji, transpose as ⋆."""
    branes = [f"b{i + 1}" for i in range(k)]
    homs = {(branes[i], branes[j]): [(f"E{j + 1}{i + 1}", 0)] for i in range(k) for j in range(k)}
    compose = {}
    for a, b, c in product(range(k), repeat=3):
        compose[(branes[a], branes[b], branes[c])] = {(0, 0): {0: F(1)}}
    units = {b: {0: F(1)} for b in branes}
    star = {(branes[i], branes[j]): SparseMatrix.identity(1) for i in range(k) for j in range(k)}
    cat = InvolutiveCategory(branes, homs, compose, units, star=star)
    return cat, CalabiYauData({b: {0: F(1)} for b in branes})


def dual_numbers(sign: int = 1) -> Tuple[InvolutiveCategory, Optional[CalabiYauData]]:
    """K[x]/x² with ⋆(x) = ±x.

    Only the ``+`` involution carries a trace: with ⋆(x) = -x a ⋆-invariant
    trace must vanish on x, which makes the pairing degenerate.
    """
    mult = {(0, 0): {0: F(1)}, (0, 1): {1: F(1)}, (1, 0): {1: F(1)}}
    c = one_object(["1", "x"], mult, {0: F(1)}, star=[[1, 0], [0, sign]])
    return c, (CalabiYauData({"a": {1: F(1)}}) if sign > 0 else None)


def koszul_dg() -> InvolutiveCategory:
    """K[x, e]/(x², e²) with |x| = 0, |e| = 1, d(e) = x and trivial involution.

    Graded commutative, so the identity is an involution under the Koszul
    convention ``(g∘f)⋆ = (-1)^{|f||g|} f⋆∘g⋆``.  Homology is spanned by 1 and xe.
    """
    names = ["1", "x", "e", "xe"]
    degrees = [0, 0, 1, 1]
    # monomials as exponent pairs (x, e); product sign from moving e past e
    mono = [(0, 0), (1, 0), (0, 1), (1, 1)]
    idx = {m: k for k, m in enumerate(mono)}
    mult = {}
    for i, (xi, ei) in enumerate(mono):
        for j, (xj, ej) in enumerate(mono):
            if xi + xj > 1 or ei + ej > 1:
                continue
            # g∘f with f = mono[i], g = mono[j] is the product g·f in the commutative algebra
            mult[(i, j)] = {idx[(xi + xj, ei + ej)]: F(1)}
    diff = [[0] * 4 for _ in range(4)]
    diff[idx[(1, 0)]][idx[(0, 1)]] = 1
    return one_object(names, mult, {0: F(1)}, degrees=degrees, diff=diff)


BUNDLED = {
    "ground_field": ground_field,
    "group_z2": group_algebra_z2,
    "matrix_m2": matrix_algebra,
    "dual_plus": lambda: dual_numbers(1),
    "dual_minus": lambda: dual_numbers(-1),
}


# fuzzing ---------------------------------------------------------------------

def _inverse(m: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    a = [row[:] + [F(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def change_basis(c: InvolutiveCategory, cy: Optional[CalabiYauData], rng: random.Random
                 ) -> Tuple[InvolutiveCategory, Optional[CalabiYauData]]:
    """Transport the structure along random invertible basis changes of every hom space.

    New basis vector ``k`` of ``Hom(a, b)`` is ``Σ_i P[i][k] e_i``.
    """
    from .exactlin import rank
    P, Pinv, homs = {}, {}, {}
    for ab in c.pairs():
        degs = [d for _, d in c.homs[ab]]
        n = len(degs)
        # only mix basis vectors of equal degree so the grading survives
        while True:
            m = [[F(rng.randint(-2, 2)) if degs[i] == degs[k] else F(0) for k in range(n)]
                 for i in range(n)]
            if rank(SparseMatrix.from_dense(m)) == n if n else True:
                break
        P[ab] = m
        Pinv[ab] = _inverse(m) if n else []
        homs[ab] = [(f"{c.homs[ab][k][0]}'", degs[k]) for k in range(n)]

    def to_new(ab, v):
        out = {}
        for k in range(c.dim(*ab)):
            x = sum((Pinv[ab][k][i] * y for i, y in v.items()), F(0))
            if x:
                out[k] = x
        return out

    def col(ab, k):
        return {i: P[ab][i][k] for i in range(c.dim(*ab)) if P[ab][i][k]}

    compose = {}
    for a, b, cc in product(c.branes, repeat=3):
        table = {}
        for i, j in product(range(c.dim(a, b)), range(c.dim(b, cc))):
            v = to_new((a, cc), c.comp_vec(a, b, cc, col((a, b), i), col((b, cc), j)))
            if v:
                table[(i, j)] = v
        if table:
            compose[(a, b, cc)] = table
    units = {a: to_new((a, a), c.units[a]) for a in c.branes}
    diff, star = {}, {}
    for a, b in c.pairs():
        n = c.dim(a, b)
        diff[(a, b)] = SparseMatrix.from_columns(n, [to_new((a, b), c.d_vec(a, b, col((a, b), k))) for k in range(n)]) \
            if n else SparseMatrix.zero(0, 0)
        star[(a, b)] = SparseMatrix.from_columns(c.dim(b, a), [to_new((b, a), c.star_vec(a, b, col((a, b), k)))
                                                               for k in range(n)]) \
            if n else SparseMatrix.zero(c.dim(b, a), 0)
    new = InvolutiveCategory(c.branes, homs, compose, units, diff=diff, star=star)
    new_cy = None
    if cy is not None:
        tr = {}
        for e in c.branes:
            t = {k: cy.tr(e, col((e, e), k)) for k in range(c.dim(e, e))}
            tr[e] = {k: x for k, x in t.items() if x}
        new_cy = CalabiYauData(tr, cy.degree)
    return new, new_cy


def direct_sum(parts: Sequence[Tuple[InvolutiveCategory, Optional[CalabiYauData]]]
               ) -> Tuple[InvolutiveCategory, Optional[CalabiYauData]]:
    """Direct product of one-object algebras (all on brane ``a``)."""
    names, degrees, mult, unit, trace = [], [], {}, {}, {}
    star_cols, diff_cols = [], []
    offset = 0
    has_trace = all(cy is not None for _, cy in parts)
    offsets = []
    for c, cy in parts:
        (br,) = c.branes
        offsets.append(offset)
        offset += c.dim(br, br)
    total = offset
    for (c, cy), off in zip(parts, offsets):
        (br,) = c.branes
        n = c.dim(br, br)
        for k, (nm, dg) in enumerate(c.homs[(br, br)]):
            names.append(f"{nm}_{off}")
            degrees.append(dg)
        for (i, j), v in c.compose_table.get((br, br, br), {}).items():
            mult[(i + off, j + off)] = {k + off: x for k, x in v.items()}
        for k, x in c.units[br].items():
            unit[k + off] = x
        for k in range(n):
            star_cols.append({i + off: x for i, x in c.star_vec(br, br, {k: F(1)}).items()})
            diff_cols.append({i + off: x for i, x in c.d_vec(br, br, {k: F(1)}).items()})
        if has_trace:
            for k, x in cy.trace.get(br, {}).items():
                trace[k + off] = x
    homs = {("a", "a"): list(zip(names, degrees))}
    cat = InvolutiveCategory(["a"], homs, {("a", "a", "a"): mult}, {"a": unit},
                             diff={("a", "a"): SparseMatrix.from_columns(total, diff_cols)},
                             star={("a", "a"): SparseMatrix.from_columns(total, star_cols)})
    return cat, (CalabiYauData({"a": trace}) if has_trace else None)


def random_involutive_algebra(rng: random.Random, max_dim: int = 4, need_trace: bool = False
                              ) -> Tuple[InvolutiveCategory, Optional[CalabiYauData]]:
    """A random ungraded involutive algebra of dimension ≤ ``max_dim``.

    Built as a product of small seeds (K, K[Z/2], K[Z/3], K[x]/x², M_2)
    followed by a random basis change, so every axiom holds by construction.
    """
    seeds = [(1, ground_field), (2, group_algebra_z2), (3, lambda: group_algebra_cyclic(3)),
             (2, lambda: dual_numbers(1)), (4, matrix_algebra)]
    if not need_trace:
        seeds.append((2, lambda: dual_numbers(-1)))
    parts = []
    room = max_dim
    while True:
        options = [s for s in seeds if s[0] <= room]
        if not options:
            break
        size, make = rng.choice(options)
        c, cy = make()
        if need_trace and cy is not None:
            scale = F(rng.choice([1, 2, 3, -1]), rng.choice([1, 2]))
            cy = CalabiYauData({e: {k: scale * x for k, x in t.items()} for e, t in cy.trace.items()})
        parts.append((c, cy))
        room -= size
        if rng.random() < 0.5 or room == 0:
            break
    base = parts[0] if len(parts) == 1 else direct_sum(parts)
    return change_basis(base[0], base[1], rng)


def random_cy_category(rng: random.Random, max_dim: int = 4
                       ) -> Tuple[InvolutiveCategory, CalabiYauData]:
    """A random CY involutive category: either an algebra or the two-object matrix category."""
    if rng.random() < 0.25:
        c, cy = matrix_category(2)
        return change_basis(c, cy, rng)
    c, cy = random_involutive_algebra(rng, max_dim, need_trace=True)
    return c, cy
