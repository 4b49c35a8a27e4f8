import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from klein import graphs as G
from klein.fileio import ParseError, dump_graph, load_graph
from oracles import brute_isomorphic


def contractible(g):
    return [h for h in g.half_edges if h < g.iota[h] and not g.is_loop(h) and g.is_internal(h)]


def test_loop_types():
    assert tuple(G.thicken_type(G.loop_graph(False))) == (0, 0, 2)
    assert tuple(G.thicken_type(G.loop_graph(True))) == (0, 1, 1)
    assert tuple(G.thicken_type(load_graph("annulus_loop.json"))) == (0, 0, 2)
    assert tuple(G.thicken_type(load_graph("mobius_loop.json"))) == (0, 1, 1)


def figure_eight(pairs, twists):
    iota = {}
    for a, b in pairs:
        iota[a], iota[b] = b, a
    colour = {a: t for (a, _), t in zip(pairs, twists)}
    return G.MobiusGraph({"v": (0, 1, 2, 3)}, iota, colour)


@pytest.mark.parametrize("pairs, twists, want", [
    (((0, 1), (2, 3)), (0, 0), (0, 0, 3)),
    (((0, 2), (1, 3)), (0, 0), (1, 0, 1)),
    (((0, 1), (2, 3)), (1, 0), (0, 1, 2)),
    (((0, 1), (2, 3)), (1, 1), (0, 2, 1)),
    (((0, 2), (1, 3)), (1, 0), (0, 2, 1)),
])
def test_figure_eight_types(pairs, twists, want):
    t = G.thicken_type(figure_eight(pairs, twists))
    assert tuple(t) == want
    assert t.euler == -1


def test_theta_types():
    assert tuple(G.thicken_type(G.theta_graph(False))) == (0, 0, 3)
    assert tuple(G.thicken_type(G.theta_graph(True))) == (1, 0, 1)


def test_thicken_errors():
    with pytest.raises(G.LegsUnsupported):
        G.thicken_type(G.corolla(3))
    two = G.MobiusGraph({"a": (0, 1), "b": (2, 3)}, {0: 1, 1: 0, 2: 3, 3: 2})
    with pytest.raises(G.Disconnected):
        G.thicken_type(two)


def test_contraction_errors():
    g = G.loop_graph(False)
    with pytest.raises(G.LoopContraction):
        G.contract_edge(g, 0)
    with pytest.raises(G.ExternalEdge):
        G.contract_edge(G.corolla(3), 0)
    with pytest.raises(G.GraphError):
        G.contract_edge(g, 99)
    with pytest.raises(G.NotReducible):
        G.reduce(G.subdivide(g, 0))


def test_bad_graphs():
    with pytest.raises(G.GraphError):
        G.MobiusGraph({"v": (0, 1)}, {0: 0, 1: 1})
    with pytest.raises(G.GraphError):
        G.MobiusGraph({"v": (0,), "w": (1,)}, {0: 1, 1: 0})  # legs missing labels
    with pytest.raises(G.GraphError):
        G.MobiusGraph({"v": (0, 1), "w": (1,)}, {0: 1, 1: 0})


def test_subdivide_then_reduce():
    for twisted in (False, True):
        g = G.theta_graph()
        if twisted:
            g = G.MobiusGraph(g.order, g.iota, {0: 1})
        s = G.subdivide(G.subdivide(g, 0), 1)
        assert G.is_isomorphic(G.reduce(s), g)[0]
        assert G.thicken_type(s) == G.thicken_type(g)


def test_gauge_colour_matters_only_through_twists():
    g = G.theta_graph()
    assert G.is_isomorphic(g, g.flip("u"))[0]
    twisted = G.MobiusGraph(g.order, g.iota, {0: 1})
    assert not G.is_isomorphic(g, twisted)[0]


def test_json_roundtrip(tmp_path):
    g = G.random_mobius_graph(random.Random(3), 10)
    from klein.fileio import save_json
    p = tmp_path / "g.json"
    save_json(dump_graph(g), p)
    h = load_graph(p)
    assert h.order == {str(v): hs for v, hs in g.order.items()} and h.colour == g.colour
    with pytest.raises(ParseError):
        load_graph({"format_version": 1, "graph": {"iota": [[0, 1]], "cyclic_order": {"v": [0]}}})


# fuzzing ------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_iso_matches_brute_oracle(seed):
    rng = random.Random(seed)
    g = G.random_mobius_graph(rng, 6)
    h = G.relabel(g, rng) if rng.random() < 0.5 else G.random_mobius_graph(rng, 6)
    assert G.is_isomorphic(g, h)[0] == brute_isomorphic(g, h)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_relabel_is_isomorphic(seed):
    rng = random.Random(seed)
    g = G.random_mobius_graph(rng, 12)
    ok, iso = G.is_isomorphic(g, G.relabel(g, rng))
    assert ok and set(iso.vertices) == set(g.vertices)


def commutativity_and_confluence(rng):
    g = G.random_mobius_graph(rng, 12, legs=rng.random() < 0.5, connected=True)
    edges = contractible(g)
    for e, f in product(edges, repeat=2):
        if e == f:
            continue
        ge, gf = G.contract_edge(g, e), G.contract_edge(g, f)
        if ge.is_loop(f) or gf.is_loop(e):
            continue
        assert G.is_isomorphic(G.contract_edge(ge, f), G.contract_edge(gf, e))[0]
    try:
        r1 = G.reduce(g, random.Random(rng.random()))
    except G.NotReducible:
        return
    r2 = G.reduce(G.relabel(g, rng), random.Random(rng.random()))
    assert G.is_reduced(r1)
    assert G.is_isomorphic(r1, r2)[0]
    if not g.legs():
        assert G.thicken_type(r1) == G.thicken_type(g)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_fuzzed_commutativity_and_confluence(seed):
    commutativity_and_confluence(random.Random(seed))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_thicken_type_invariances(seed):
    rng = random.Random(seed)
    g = G.random_mobius_graph(rng, 12, legs=False, connected=True)
    t = G.thicken_type(g)
    assert t.euler == len(g.vertices) - len(g.edges())
    assert G.thicken_type(G.relabel(g, rng)) == t
    for v in g.vertices:
        assert G.thicken_type(g.flip(v)) == t
    for h in contractible(g):
        assert G.thicken_type(G.contract_edge(g, h)) == t


EMPTY = {(0, 0, 1, 0), (0, 0, 1, 1), (0, 0, 1, 2), (0, 0, 2, 0), (0, 1, 1, 0)}


def test_moduli_predicate():
    for g, u, h, n in product(range(4), range(3), range(4), range(4)):
        assert G.is_moduli_nonempty(g, u, h, n) == ((g, u, h, n) not in EMPTY)
    with pytest.raises(ValueError):
        G.is_moduli_nonempty(0, 3, 0, 0)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_subdivision_is_undone_by_reduce(seed):
    rng = random.Random(seed)
    g = G.random_mobius_graph(rng, 10, legs=False, connected=True)
    h = rng.choice(list(g.half_edges))
    s = G.subdivide(g, h)
    assert G.thicken_type(s) == G.thicken_type(g)
    if G.is_reduced(g):
        assert G.is_isomorphic(G.reduce(s, rng), g)[0]
