import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from klein import library
from klein.ainfty import (CalabiYauData, check_ainfty_relations, check_calabi_yau, check_involution_compatibility,
                          from_dg, pairing_matrix, reversal_sign)
from klein.fileio import ParseError, dump_category, load_category
from klein.invcat import InvolutiveCategory, ShapeMismatch, check_dg_axioms, check_involution_axioms
from perturb import perturbations, run_suites

BUNDLED = ["ground_field", "group_algebra_z2", "matrix_algebra", "matrix_category",
           "dual_numbers_plus", "dual_numbers_minus", "koszul_dg"]

# perturbations that produce another valid structure (see the decisions ledger)
VALID_PERTURBATIONS = {
    "ground_field": {"trace('a', 0)"},
    "group_algebra_z2": {"compose('a', 'a', 'a', 1, 1, 0)", "compose('a', 'a', 'a', 1, 1, 1)", "trace('a', 0)"},
    "matrix_algebra": set(),
    "matrix_category": set(),
    "dual_numbers_plus": {"compose('a', 'a', 'a', 1, 1, 0)", "compose('a', 'a', 'a', 1, 1, 1)",
                          "trace('a', 0)", "trace('a', 1)"},
    "dual_numbers_minus": {"compose('a', 'a', 'a', 1, 1, 0)"},
    "koszul_dg": {"diff('a', 'a', 1, 2)"},
}


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_pass_all_suites(name):
    c, cy = load_category(name + ".json")
    reports = run_suites(c, cy)
    assert all(r.ok for r in reports), [str(r) for r in reports]
    assert (cy is None) == (name in ("dual_numbers_minus", "koszul_dg"))


@pytest.mark.parametrize("name", BUNDLED)
def test_perturbations_fail_with_witness(name):
    c, cy = load_category(name + ".json")
    undetected = set()
    for label, c2, cy2 in perturbations(c, cy):
        reports = run_suites(c2, cy2)
        bad = [v for r in reports for v in r.violations]
        if not bad:
            undetected.add(label)
        else:
            assert all(v.witness for v in bad)
    assert undetected == VALID_PERTURBATIONS[name]


def test_undetected_perturbations_are_genuine_structures():
    # s·s = 2 in K[Z/2]: K[s]/(s² - 2), commutative, trace a + b s ↦ a, pairing diag(1, 2)
    c, cy = load_category("group_algebra_z2.json")
    for label, c2, cy2 in perturbations(c, cy):
        if label == "compose('a', 'a', 'a', 1, 1, 0)":
            assert c2.comp_basis("a", "a", "a", 1, 1) == {0: 2}
            p = pairing_matrix(from_dg(c2), cy2, "a", "a")
            assert p.to_dense() == [[1, 0], [0, 2]]


def test_file_and_library_agree():
    pairs = {"ground_field": library.ground_field, "group_algebra_z2": library.group_algebra_z2,
             "matrix_algebra": library.matrix_algebra, "matrix_category": library.matrix_category,
             "dual_numbers_plus": lambda: library.dual_numbers(1),
             "dual_numbers_minus": lambda: library.dual_numbers(-1),
             "koszul_dg": lambda: (library.koszul_dg(), None)}
    for name, make in pairs.items():
        c, cy = make()
        assert dump_category(c, cy) == dump_category(*load_category(name + ".json"))


def test_roundtrip_through_json():
    c, cy = library.matrix_algebra()
    c2, cy2 = load_category(dump_category(c, cy))
    assert dump_category(c2, cy2) == dump_category(c, cy)


def test_nonassociative_is_reported():
    # a·a = b, everything else with b zero: (a·a)·a = b·a = 0 but pick a·b = a to break it
    mult = {(0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (1, 0): {1: 1}, (2, 0): {2: 1},
            (1, 1): {2: 1}, (1, 2): {1: 1}}
    c = library.one_object(["1", "a", "b"], mult, {0: 1})
    rep = check_dg_axioms(c)
    assert not rep.ok
    assert any(v.kind == "associativity" for v in rep.violations)


def test_bad_star_is_reported():
    # transpose composed with a sign on E12 is not an anti-homomorphism
    c, _ = library.matrix_algebra()
    star = dict(c.star)
    m = star[("a", "a")].to_dense()
    m[2][1] = -m[2][1]
    from klein.exactlin import SparseMatrix
    star[("a", "a")] = SparseMatrix.from_dense(m)
    c2 = InvolutiveCategory(c.branes, c.homs, c.compose_table, c.units, diff=c.diff, star=star)
    assert not check_involution_axioms(c2).ok


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        InvolutiveCategory(["a"], {("a", "a"): [("1", 0)]}, {("a", "a", "a"): {(0, 1): {0: 1}}}, {"a": {0: 1}})
    with pytest.raises(ShapeMismatch):
        InvolutiveCategory(["a", "a"], {}, {}, {"a": {}})


def test_degenerate_trace_is_reported():
    c, _ = library.matrix_algebra()
    rep = check_calabi_yau(from_dg(c), CalabiYauData({"a": {}}))
    assert any(v.kind == "degenerate_pairing" for v in rep.violations)


def test_from_dg_signs():
    c = library.koszul_dg()
    a = from_dg(c, 3)
    # m2(e, e) = (-1)^{1·1} e∘e = 0 here; m2(e, x) = x∘e = xe
    assert a.m(("a", "a", "a"), (2, 1)) == {3: 1}
    assert a.m(("a", "a"), (2,)) == {1: 1}
    assert check_ainfty_relations(a).ok
    assert check_involution_compatibility(a).ok


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=6))
def test_reversal_sign_is_koszul(degs):
    odd = [d for d in degs if d % 2]
    inversions = len(odd) * (len(odd) - 1) // 2
    assert reversal_sign(degs) == (-1) ** inversions


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_categories_pass(seed):
    c, cy = library.random_cy_category(random.Random(seed))
    assert all(r.ok for r in run_suites(c, cy))


@pytest.mark.parametrize("bad, where", [
    ({"format_version": 2}, "format_version"),
    ({"format_version": 1}, "missing field"),
    ({"format_version": 1, "branes": ["a"], "homs": [{"source": "a", "target": "a", "basis": [["1", 0]]}],
      "units": {"a": {"1": "x"}}}, "rational"),
    ({"format_version": 1, "branes": ["a"], "homs": [{"source": "a", "target": "b", "basis": []}],
      "units": {}}, "unknown brane"),
])
def test_parse_errors(bad, where):
    with pytest.raises(ParseError, match=where):
        load_category(bad)


def test_missing_file_is_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_category(tmp_path / "nope.json")
    p = tmp_path / "broken.json"
    p.write_text("{ not json")
    with pytest.raises(ParseError, match="broken.json:1"):
        load_category(p)


def test_rational_strings():
    c, cy = load_category({"format_version": 1, "branes": ["a"],
                           "homs": [{"source": "a", "target": "a", "basis": [["1", 0]]}],
                           "compose": [{"path": ["a", "a", "a"], "left": "1", "right": "1", "value": {"1": "1"}}],
                           "units": {"a": {"1": 1}}, "trace": {"a": {"1": "3/4"}}})
    assert cy.trace["a"] == {0: Fraction(3, 4)}
