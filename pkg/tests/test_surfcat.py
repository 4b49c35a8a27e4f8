import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from klein import library
from klein import surfcat as S
from klein.ainfty import CalabiYauData, from_dg
from klein.exactlin import SparseMatrix
from klein.hochschild import build_normalized_involutive
from klein.surfcat import (Annulus, DiscAllIn, DiscIn2, DiscOut2, DiscPlus, Identity, ObjectLabel, Permutation,
                           TwistedDisc, compose, differential, evaluate, normalize, tensor)
from surf_cases import CONTROL_CASES, RULE_CASES, I, W, instances, needs_closed


# words and normal forms ------------------------------------------------------------

def test_relation_examples():
    assert normalize(compose(W(TwistedDisc("a", "b")), W(TwistedDisc("b", "a")))) == I(("a", "b"))
    assert normalize(compose(tensor(W(DiscPlus("a")), I(("a", "b"))), W(DiscPlus("a", "a", "b")))) == I(("a", "b"))
    assert normalize(compose(tensor(I(("a", "b")), W(DiscPlus("b"))), W(DiscPlus("a", "b", "b")))) == I(("a", "b"))
    w = compose(tensor(tensor(I(("a", "b")), W(DiscPlus("b"))), I(("b", "c"))), W(DiscPlus("a", "b", "b", "c")))
    assert normalize(w).is_zero()


def test_identity_laws_and_label_mismatch():
    w = W(DiscPlus("a", "b", "c"))
    assert normalize(compose(I(("a", "b"), ("b", "c")), w)) == normalize(w)
    assert normalize(compose(w, I(("a", "c")))) == normalize(w)
    assert normalize(tensor(I(("a", "b")), I(("c", "d")))) == I(("a", "b"), ("c", "d"))
    with pytest.raises(S.LabelMismatch):
        compose(W(TwistedDisc("a", "b")), W(TwistedDisc("a", "b")))
    with pytest.raises(S.LabelMismatch):
        W(DiscPlus("a", "b")) + W(DiscPlus("a", "c"))
    with pytest.raises(S.SurfaceError):
        Permutation(ObjectLabel.of(("a", "b")), [1])
    with pytest.raises(S.SurfaceError):
        S.Generator("twist", ("a",))


def test_generator_ports():
    g = DiscPlus("a", "b", "c", "d")
    assert g.inputs == (("o", "a", "b"), ("o", "b", "c"), ("o", "c", "d"))
    assert g.outputs == (("o", "a", "d"),) and g.degree == 1
    a = Annulus("a", "b", "c")
    assert a.inputs[-1] == ("o", "c", "a") and a.outputs == (S.CLOSED,) and a.degree == 2
    assert DiscAllIn("a", "b", "c", "d", "e").degree == 2
    lab = ObjectLabel.of(("a", "b"), "c", ("b", "a"))
    assert (lab.open_count, lab.closed_count, lab.s, lab.t) == (2, 1, ("a", "b"), ("b", "a"))


@pytest.mark.parametrize("name", list(RULE_CASES))
def test_normalize_idempotent_and_fires(name):
    build, kind = RULE_CASES[name]
    w = build("a", "b", "c")
    n = normalize(w)
    assert normalize(n) == n
    if kind == "zero":
        assert n.is_zero()
    elif kind == "nonzero":
        assert not n.is_zero() and n != w


def test_cyclic_rule_orders_labels():
    w = W(DiscAllIn("c", "a", "b"))
    n = normalize(w)
    (d,) = n.terms
    assert d.boxes[0].labels == ("a", "b", "c")
    # rotation by one step of a 3-point disc has sign (-1)^{2} = +1
    assert n.terms[d] == 1
    # one step on four points costs (-1)^{3}, two steps cost nothing
    for start, sign in ((("c", "a", "a", "b"), -1), (("b", "c", "a", "a"), 1)):
        n4 = normalize(W(DiscAllIn(*start)))
        (d4,) = n4.terms
        assert d4.boxes[0].labels == ("a", "a", "b", "c")
        assert n4.terms[d4] == sign


def test_nontermination_guard(monkeypatch):
    w = compose(W(TwistedDisc("a", "b")), W(TwistedDisc("b", "a")))
    with pytest.raises(S.NonTermination):
        normalize(w, max_steps=0)
    monkeypatch.setenv("KLEIN_MAX_REWRITE_STEPS", "0")
    with pytest.raises(S.NonTermination):
        normalize(w)
    monkeypatch.delenv("KLEIN_MAX_REWRITE_STEPS")
    assert S.rewrite_bound(w) == 10 * w.size


def floating_allin(n_out2):
    """An all-in disc fed only by DiscOut2 boxes: a closed piece with no boundary."""
    outs = W(DiscOut2("a", "a"))
    for _ in range(n_out2 - 1):
        outs = tensor(outs, W(DiscOut2("a", "a")))
    return compose(outs, W(DiscAllIn(*["a"] * (2 * n_out2))))


def test_odd_symmetric_terms_vanish():
    # two identical odd floating pieces cancel under the Koszul sign
    odd = floating_allin(2)
    assert not odd.is_zero()
    assert tensor(odd, odd).is_zero()
    # boundary-attached copies are not interchangeable
    d = W(DiscAllIn("a", "a", "a", "a"))
    assert not tensor(d, d).is_zero()


# differential ----------------------------------------------------------------------

def test_differential_examples():
    assert differential(W(DiscAllIn("a", "b", "c"))).is_zero()
    assert differential(W(DiscPlus("a", "b", "c"))).is_zero()
    assert differential(I(("a", "b"), "c")).is_zero()
    # four inputs: bubbles of two inputs at three places, of three inputs at two
    assert len(differential(W(DiscPlus("a", "b", "c", "d", "e"))).terms) == 5


@pytest.mark.parametrize("kind", ["plus", "allin", "annulus"])
@pytest.mark.parametrize("n", range(1, 7))
def test_d_squared_on_generators(kind, n):
    if kind != "annulus" and n < 3:
        return
    labels = "abcdef"[:n]
    g = S.Generator(kind, tuple(labels))
    assert differential(differential(W(g))).is_zero()
    same = S.Generator(kind, ("a",) * n)
    assert differential(differential(W(same))).is_zero()


def test_d_squared_on_composites():
    w = compose(tensor(W(DiscPlus("a", "b", "c", "d", "e")), I(("e", "f"), ("f", "a"))),
                W(DiscPlus("a", "e", "f", "a")))
    w = compose(w, W(Annulus("a")))
    assert not differential(w).is_zero()
    assert differential(differential(w)).is_zero()
    v = tensor(W(DiscPlus("a", "b", "c", "d")), W(Annulus("a", "b", "c")))
    assert differential(differential(v)).is_zero()


# evaluation ------------------------------------------------------------------------

def test_evaluation_dictionary():
    c, cy = library.group_algebra_z2()
    A = from_dg(c, 3)
    assert evaluate(W(TwistedDisc("a", "a")), A, cy) == c.star[("a", "a")]
    assert evaluate(W(DiscPlus("a")), A, cy) == SparseMatrix(2, 1, {(0, 0): 1})
    assert evaluate(W(DiscPlus("a", "a")), A, cy) == SparseMatrix.identity(2)
    m = evaluate(W(DiscPlus("a", "a", "a")), A, cy)
    # m2(s, s) = 1 sits in the column of the pair (s, s) = 1·2 + 1
    assert m.column(3) == {0: 1}
    assert evaluate(W(DiscIn2("a", "a")), A, cy).to_dense() == [[1, 0, 0, 1]]


def test_evaluation_errors():
    c, cy = library.group_algebra_z2()
    A = from_dg(c, 3)
    with pytest.raises(S.UnsupportedGenerator):
        evaluate(W(Annulus("a")), A, cy)
    with pytest.raises(S.NondegeneracyRequired):
        evaluate(W(DiscOut2("a", "a")), A, CalabiYauData({"a": {}}))
    with pytest.raises(S.LabelMismatch):
        evaluate(W(TwistedDisc("a", "b")), A, cy)


def test_out_in_pairing_inverse():
    c, cy = library.matrix_algebra()
    A = from_dg(c, 3)
    pairing = evaluate(W(DiscIn2("a", "a")), A, cy)
    copairing = evaluate(W(DiscOut2("a", "a")), A, cy)
    # ⟨-,-⟩ ⊗ id after id ⊗ copairing is the identity (snake)
    snake = tensor(I(("a", "a")), W(DiscOut2("a", "a")))
    snake = compose(snake, tensor(W(DiscIn2("a", "a")), I(("a", "a"))))
    assert evaluate(snake, A, cy) == SparseMatrix.identity(4)
    assert pairing.rows == 1 and copairing.cols == 1


@pytest.mark.parametrize("make", [library.group_algebra_z2, library.matrix_category, library.matrix_algebra])
def test_functoriality_and_monoidality(make):
    c, cy = make()
    A = from_dg(c, 3)
    b = c.branes
    w1 = W(DiscPlus(b[0], b[-1], b[0]))
    w2 = W(TwistedDisc(b[0], b[0]))
    assert evaluate(compose(w1, w2), A, cy) == evaluate(w2, A, cy) @ evaluate(w1, A, cy)
    t = tensor(w2, W(DiscPlus(b[0], b[-1])))
    assert evaluate(t, A, cy) == evaluate(w2, A, cy).kron(evaluate(W(DiscPlus(b[0], b[-1])), A, cy))


def soundness(c, cy, closed):
    A = from_dg(c, 4)
    for name, lab, w in instances(c.branes):
        cl = closed if needs_closed(w) else None
        n = normalize(w)
        lhs, rhs = evaluate(w, A, cy, cl), evaluate(n, A, cy, cl)
        assert lhs == rhs, (name, lab)
        if RULE_CASES[name][1] == "zero":
            assert n.is_zero() and lhs.is_zero(), (name, lab)
    for name, build in CONTROL_CASES.items():
        b = c.branes
        w = build(b[0], b[-1], b[0])
        assert not normalize(w).is_zero()


def rotation_relation(c, cy, n_max=4):
    """D(λ_r, …) ∘ (cyclic input permutation) = (-1)^{(n-1) r} D(λ_0, …)."""
    A = from_dg(c, 4)
    for n in range(3, n_max + 1):
        for lab in [tuple((c.branes * n)[:n]), tuple(reversed((c.branes * n)[:n]))]:
            base = W(DiscAllIn(*lab))
            for r in range(1, n):
                perm = [(k + r) % n for k in range(n)]
                rot = compose(Permutation(base.source, perm), W(DiscAllIn(*(lab[r:] + lab[:r]))))
                lhs = evaluate(rot, A, cy)
                rhs = evaluate(base, A, cy).scale((-1) ** ((n - 1) * r))
                assert lhs == rhs, (lab, r)


@pytest.mark.parametrize("make", [library.ground_field, library.group_algebra_z2, library.matrix_algebra,
                                  library.matrix_category, lambda: library.dual_numbers(1)])
def test_rule_soundness_bundled(make):
    c, cy = make()
    soundness(c, cy, build_normalized_involutive(c, 3))
    rotation_relation(c, cy)


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rule_soundness_fuzzed(seed):
    c, cy = library.random_cy_category(random.Random(seed), 3)
    soundness(c, cy, build_normalized_involutive(c, 3))
    rotation_relation(c, cy, 3)


# chain-level compatibility with the DG structure ------------------------------------

def _mul(a, b):
    rows = {}
    for (r, m), v in b.items():
        rows.setdefault(r, []).append((m, v))
    out = {}
    for (r, m), v in a.items():
        for cc, x in rows.get(m, []):
            out[(r, cc)] = out.get((r, cc), 0) + v * x
    return {k: v for k, v in out.items() if v}


def intertwines(ev, w, deg):
    lhs = ev.word_matrix(differential(w))
    E = ev.word_matrix(w)
    rhs = _mul(ev.object_differential(w.target.items), E)
    for k, v in _mul(E, ev.object_differential(w.source.items)).items():
        rhs[k] = rhs.get(k, 0) - (-1) ** deg * v
    return lhs == {k: v for k, v in rhs.items() if v}


def test_evaluation_intertwines_differentials():
    c = library.koszul_dg()
    A = from_dg(c, 5)
    ev = S.Evaluator(A, closed=build_normalized_involutive(c, 3))
    for n in range(3, 6):
        g = DiscPlus(*["a"] * n)
        assert intertwines(ev, W(g), g.degree)
    for n in range(1, 4):
        g = Annulus(*["a"] * n)
        assert intertwines(ev, W(g), g.degree)


# closed states -------------------------------------------------------------------

@pytest.mark.parametrize("name", ["ground_field", "group_algebra_z2", "matrix_category",
                                  "dual_numbers_plus", "dual_numbers_minus", "koszul_dg"])
def test_closed_states_equal_hochschild(name):
    from klein.fileio import load_category
    c, _ = load_category(name + ".json")
    cs = S.closed_state_complex(c, 3)
    hh = build_normalized_involutive(c, 3)
    res = S.compare_with_hochschild(cs, hh)
    assert res["iso"] and res["commutes"] and res["dims"] == res["hochschild_dims"]


def test_closed_state_examples():
    c, _ = library.ground_field()
    assert S.closed_state_complex(c, 1).dims() == {0: 1}
    z, _ = library.group_algebra_z2()
    cs = S.closed_state_complex(z, 3)
    index = {s: j for j, s in enumerate(cs.states[1])}
    # unit in a non-special slot is zero
    assert not cs.quotients[1].project({index[(("a", "a"), (0, 1))]: 1})
    # the reflection identifies a state with its mirror image
    m, _ = library.matrix_category()
    cm = S.closed_state_complex(m, 4)
    st = {s: j for j, s in enumerate(cm.states[3])}
    x = cm.quotients[3].project({st[(("b1", "b2", "b1", "b2"), (0, 0, 0, 0))]: 1})
    y = cm.quotients[3].project({st[(("b2", "b1", "b2", "b1"), (0, 0, 0, 0))]: 1})
    assert x and (x == y or x == {k: -v for k, v in y.items()})
    # with ⋆x = -x the reflection identifies x with -x in degree 0
    d, _ = library.dual_numbers(-1)
    assert S.closed_state_complex(d, 1).dims() == {0: 1}
    with pytest.raises(ValueError):
        S.closed_state_complex(c, 0)
