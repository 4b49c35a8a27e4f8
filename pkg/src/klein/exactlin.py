"""Exact linear algebra over the rationals.

Everything here works with :class:`fractions.Fraction` entries and sparse
row dictionaries.  Elimination uses a fixed pivot rule (leftmost column,
lowest row index) so that results are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Scalar = Fraction
Vector = Dict[int, Fraction]


class ComplexInvalid(ValueError):
    """Raised when a putative chain complex has d∘d ≠ 0 or bad shapes."""


def scalar(x) -> Fraction:
    """Parse ``x`` (int, Fraction or a string ``"p/q"``) into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SparseMatrix:
    """A rows × cols matrix storing only nonzero entries."""

    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            v = scalar(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        ent = {(i, j): scalar(v) for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(len(rows), ncols, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, Fraction]]) -> "SparseMatrix":
        ent = {(i, j): v for j, col in enumerate(columns) for i, v in col.items()}
        return cls(rows, len(columns), ent)

    @classmethod
    def from_rows(cls, cols: int, rows: Sequence[Mapping[int, Fraction]]) -> "SparseMatrix":
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in row.items()}
        return cls(len(rows), cols, ent)

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        return self.entries.get(ij, Fraction(0))

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> List[Vector]:
        out: List[Vector] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> Vector:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> List[Vector]:
        out: List[Vector] = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def is_zero(self) -> bool:
        return not self.entries

    # arithmetic -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent.get(k, 0) + v
        return SparseMatrix(self.rows, self.cols, ent)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = scalar(c)
        return SparseMatrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right_rows = other.row_dicts()
        ent: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in right_rows[k].items():
                ent[(i, j)] = ent.get((i, j), 0) + a * b
        return SparseMatrix(self.rows, other.cols, ent)

    def apply(self, v: Mapping[int, Fraction]) -> Vector:
        cols = self.columns()
        out: Vector = {}
        for j, x in v.items():
            if not x:
                continue
            for i, a in cols[j].items():
                out[i] = out.get(i, 0) + a * x
        return {i: x for i, x in out.items() if x}

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def kron(self, other: "SparseMatrix") -> "SparseMatrix":
        ent = {}
        for (i, j), a in self.entries.items():
            for (k, l), b in other.entries.items():
                ent[(i * other.rows + k, j * other.cols + l)] = a * b
        return SparseMatrix(self.rows * other.rows, self.cols * other.cols, ent)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# elimination ---------------------------------------------------------------

def _rref_rows(rows: Iterable[Mapping[int, Fraction]]) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form of a list of sparse rows.

    Returns the nonzero reduced rows (each with leading coefficient 1) and
    their pivot columns, both sorted by pivot.
    """
    pending = [{j: scalar(v) for j, v in r.items() if v} for r in rows]
    pending = [r for r in pending if r]
    basis: Dict[int, Vector] = {}
    for row in pending:
        row = dict(row)
        # clear every existing pivot column; kept rows are already reduced
        for p in [j for j in row if j in basis]:
            c = row.pop(p)
            for j, v in basis[p].items():
                if j == p:
                    continue
                nv = row.get(j, 0) - c * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {j: v * inv for j, v in row.items()}
        # back-substitute into the rows already kept
        for q, other in basis.items():
            c = other.get(p)
            if c:
                for j, v in row.items():
                    nv = other.get(j, 0) - c * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        basis[p] = row
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def rref(m: SparseMatrix) -> Tuple[SparseMatrix, List[int]]:
    rows, pivots = _rref_rows(m.row_dicts())
    return SparseMatrix.from_rows(m.cols, rows) if rows else SparseMatrix.zero(0, m.cols), pivots


def rank(m: SparseMatrix) -> int:
    """Exact rank over the rationals."""
    if not m.entries:
        return 0
    # eliminate along the shorter side
    rows = m.row_dicts() if m.rows <= m.cols else m.transpose().row_dicts()
    return len(_rref_rows(rows)[1])


def kernel_basis(m: SparseMatrix) -> List[Vector]:
    """A basis of ``{v : m v = 0}`` as sparse column vectors."""
    rows, pivots = _rref_rows(m.row_dicts())
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v: Vector = {free: Fraction(1)}
        for p, row in zip(pivots, rows):
            c = row.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Quotient:
    """A presentation of ``K^ambient / span(relations)``.

    ``projection`` is dim × ambient, ``section`` is ambient × dim, and
    ``representatives[i]`` is the ambient coordinate lifted by ``section``.
    """

    ambient: int
    dim: int
    projection: SparseMatrix
    section: SparseMatrix
    representatives: Tuple[int, ...]

    def project(self, v: Mapping[int, Fraction]) -> Vector:
        return self.projection.apply(v)


def quotient_presentation(ambient_dim: int, relations: Sequence[Mapping[int, Fraction]]) -> Quotient:
    """Quotient of ``K^ambient_dim`` by the span of ``relations``.

    Relation vectors may be given as dicts or as dense sequences.
    """
    rels = []
    for r in relations:
        if not isinstance(r, Mapping):
            if len(r) != ambient_dim:
                raise ValueError("relation vector has wrong length")
            r = {j: v for j, v in enumerate(r) if v}
        rels.append(r)
    rows, pivots = _rref_rows(rels)
    pivot_set = set(pivots)
    reps = tuple(c for c in range(ambient_dim) if c not in pivot_set)
    index = {c: i for i, c in enumerate(reps)}
    ent = {(index[c], c): Fraction(1) for c in reps}
    for p, row in zip(pivots, rows):
        for c, v in row.items():
            if c != p:
                ent[(index[c], p)] = -v
    proj = SparseMatrix(len(reps), ambient_dim, ent)
    sec = SparseMatrix(ambient_dim, len(reps), {(c, i): Fraction(1) for i, c in enumerate(reps)})
    return Quotient(ambient_dim, len(reps), proj, sec, reps)


# chain complexes -------------------------------------------------------------

@dataclass(frozen=True)
class FiniteComplex:
    """A bounded chain complex ``C_hi → … → C_lo``.

    ``differentials[k]`` is the matrix of ``d_k : C_k → C_{k-1}``; missing
    entries mean the zero map.
    """

    dims: Mapping[int, int]
    differentials: Mapping[int, SparseMatrix] = field(default_factory=dict)

    def __post_init__(self):
        for k, d in self.differentials.items():
            if d.shape != (self.dim(k - 1), self.dim(k)):
                raise ComplexInvalid(
                    f"d_{k} has shape {d.shape}, expected {(self.dim(k - 1), self.dim(k))}")

    @property
    def degrees(self) -> range:
        if not self.dims:
            return range(0)
        return range(min(self.dims), max(self.dims) + 1)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def d(self, k: int) -> SparseMatrix:
        m = self.differentials.get(k)
        return m if m is not None else SparseMatrix.zero(self.dim(k - 1), self.dim(k))


def verify_complex(c: FiniteComplex) -> List[int]:
    """Degrees ``k`` where ``d_{k-1} d_k`` is nonzero (empty list if valid)."""
    bad = []
    for k in c.degrees:
        if c.dim(k - 2) and c.dim(k) and not (c.d(k - 1) @ c.d(k)).is_zero():
            bad.append(k)
    return bad


def homology_dims(c: FiniteComplex) -> Dict[int, int]:
    bad = verify_complex(c)
    if bad:
        raise ComplexInvalid(f"d∘d ≠ 0 into degrees {[k - 2 for k in bad]}")
    ranks = {k: rank(c.d(k)) for k in range(c.degrees.start, c.degrees.stop + 1)}
    return {k: c.dim(k) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in c.degrees}
