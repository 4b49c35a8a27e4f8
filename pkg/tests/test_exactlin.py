from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, Rational

from klein.exactlin import (ComplexInvalid, FiniteComplex, SparseMatrix, homology_dims, kernel_basis,
                            quotient_presentation, rank, rref, verify_complex)
from oracles import minor_rank

small = st.integers(-3, 3).map(Fraction) | st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    sparse = draw(st.booleans())
    vals = st.just(Fraction(0)) | small if sparse else small
    return [[draw(vals) for _ in range(c)] for _ in range(r)]


def sym(rows, ncols):
    return Matrix(len(rows), ncols, [Rational(x.numerator, x.denominator) for r in rows for x in r])


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    ncols = len(rows[0]) if rows else 0
    m = SparseMatrix.from_dense(rows) if rows else SparseMatrix.zero(0, 0)
    assert rank(m) == sym(rows, ncols).rank()


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_rank_matches_minor_oracle(rows):
    if not rows or not rows[0]:
        return
    assert rank(SparseMatrix.from_dense(rows)) == minor_rank(rows)


@settings(max_examples=150, deadline=None)
@given(matrices(5, 7))
def test_rref_matches_sympy(rows):
    if not rows or not rows[0]:
        return
    m = SparseMatrix.from_dense(rows)
    r, piv = rref(m)
    ref, ref_piv = sym(rows, len(rows[0])).rref()
    assert tuple(piv) == ref_piv
    dense = r.to_dense()
    for i in range(len(piv)):
        assert [Rational(x.numerator, x.denominator) for x in dense[i]] == list(ref.row(i))


@settings(max_examples=150, deadline=None)
@given(matrices(5, 7))
def test_kernel_is_kernel_of_right_size(rows):
    if not rows or not rows[0]:
        return
    m = SparseMatrix.from_dense(rows)
    ker = kernel_basis(m)
    assert len(ker) == m.cols - rank(m)
    for v in ker:
        assert not m.apply(v)
    if ker:
        assert rank(SparseMatrix.from_columns(m.cols, ker)) == len(ker)


@settings(max_examples=100, deadline=None)
@given(matrices(4, 6))
def test_quotient_presentation(rows):
    if not rows or not rows[0]:
        return
    n = len(rows[0])
    q = quotient_presentation(n, rows)
    rels = SparseMatrix.from_dense(rows)
    assert q.dim == n - rank(rels)
    assert q.projection @ q.section == SparseMatrix.identity(q.dim)
    for r in rows:
        assert not q.project({j: v for j, v in enumerate(r) if v})


@settings(max_examples=100, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_matmul_and_transpose(a, b):
    if not a or not a[0] or not b or not b[0]:
        return
    if len(a[0]) != len(b):
        return
    A, B = SparseMatrix.from_dense(a), SparseMatrix.from_dense(b)
    ref = sym(a, len(a[0])) * sym(b, len(b[0]))
    got = (A @ B).to_dense()
    assert [[Rational(x.numerator, x.denominator) for x in r] for r in got] == ref.tolist()
    assert (A @ B).transpose() == B.transpose() @ A.transpose()


def test_bad_entry_rejected():
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(2, 0): 1})


def test_complex_validation_and_homology():
    # the simplicial circle: two vertices, two edges
    d1 = SparseMatrix.from_dense([[-1, -1], [1, 1]])
    c = FiniteComplex({0: 2, 1: 2}, {1: d1})
    assert verify_complex(c) == []
    assert homology_dims(c) == {0: 1, 1: 1}
    with pytest.raises(ComplexInvalid):
        FiniteComplex({0: 2, 1: 2}, {1: SparseMatrix.zero(3, 2)})
    bad = FiniteComplex({0: 1, 1: 1, 2: 1}, {1: SparseMatrix.identity(1), 2: SparseMatrix.identity(1)})
    assert verify_complex(bad) == [2]
    with pytest.raises(ComplexInvalid):
        homology_dims(bad)
