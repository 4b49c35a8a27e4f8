"""Finite, ribbon and Möbius graphs.

Half-edges are integers.  A ribbon graph is given by the cyclic order of
half-edges at each vertex (which also determines the incidence map λ) and a
fixed-point-free involution ι pairing half-edges into edges.  Legs are the
univalent vertices and carry distinct labels.  A Möbius graph adds a colour
``c(h) ∈ {0, 1}`` per half-edge.

An edge is *twisted* when its two colours differ.  Flipping a vertex
(reversing its cyclic order and all incident colours) is an isomorphism.
Isomorphisms reverse or keep the cyclic order at each vertex and match edge
twists up to those choices, so individual colours only matter through the
twists they define.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

Vertex = Hashable


class GraphError(ValueError):
    pass


class LoopContraction(GraphError):
    pass


class ExternalEdge(GraphError):
    pass


class NotReducible(GraphError):
    pass


class Disconnected(GraphError):
    pass


class LegsUnsupported(GraphError):
    pass


class FiniteGraph:
    """Vertices, half-edges, the involution ι and the incidence map λ."""

    def __init__(self, vertices: Sequence[Vertex], iota: Mapping[int, int], lam: Mapping[int, Vertex]):
        self.vertices = tuple(vertices)
        self.iota = dict(iota)
        self.lam = dict(lam)
        self.half_edges = tuple(sorted(self.lam))
        vs = set(self.vertices)
        if set(self.iota) != set(self.lam):
            raise GraphError("ι and λ must have the same half-edges")
        for h, k in self.iota.items():
            if self.iota.get(k) != h:
                raise GraphError(f"ι is not an involution at {h}")
            if h == k:
                raise GraphError(f"half-edge {h} is unpaired; use a leg vertex instead")
        for h, v in self.lam.items():
            if v not in vs:
                raise GraphError(f"half-edge {h} attached to unknown vertex {v}")

    def valence(self, v: Vertex) -> int:
        return sum(1 for w in self.lam.values() if w == v)

    def edges(self) -> List[Tuple[int, int]]:
        return sorted({tuple(sorted((h, k))) for h, k in self.iota.items()})

    def legs(self) -> List[Vertex]:
        return [v for v in self.vertices if self.valence(v) == 1]

    def is_loop(self, h: int) -> bool:
        return self.lam[h] == self.lam[self.iota[h]]

    def is_internal(self, h: int) -> bool:
        return self.valence(self.lam[h]) > 1 and self.valence(self.lam[self.iota[h]]) > 1

    def components(self) -> List[List[Vertex]]:
        adj: Dict[Vertex, set] = {v: set() for v in self.vertices}
        for h, k in self.iota.items():
            adj[self.lam[h]].add(self.lam[k])
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(comp)
        return comps


class RibbonGraph(FiniteGraph):
    """A graph with a cyclic order of the half-edges at each vertex."""

    def __init__(self, order: Mapping[Vertex, Sequence[int]], iota: Mapping[int, int],
                 legs: Optional[Mapping[Vertex, int]] = None):
        self.order = {v: tuple(hs) for v, hs in order.items()}
        lam = {}
        for v, hs in self.order.items():
            for h in hs:
                if h in lam:
                    raise GraphError(f"half-edge {h} appears twice in the cyclic orders")
                lam[h] = v
        super().__init__(list(self.order), iota, lam)
        legs = dict(legs or {})
        uni = {v for v in self.vertices if len(self.order[v]) == 1}
        if set(legs) != uni:
            raise GraphError("leg labels must be given exactly on the univalent vertices")
        if len(set(legs.values())) != len(legs):
            raise GraphError("leg labels must be distinct")
        self.leg_labels = legs

    def succ(self, h: int, step: int = 1) -> int:
        hs = self.order[self.lam[h]]
        return hs[(hs.index(h) + step) % len(hs)]


class MobiusGraph(RibbonGraph):
    """A ribbon graph with half-edges coloured by ℤ/2."""

    def __init__(self, order: Mapping[Vertex, Sequence[int]], iota: Mapping[int, int],
                 colour: Optional[Mapping[int, int]] = None, legs: Optional[Mapping[Vertex, int]] = None):
        super().__init__(order, iota, legs)
        colour = dict(colour or {})
        self.colour = {h: colour.get(h, 0) % 2 for h in self.half_edges}

    def twisted(self, h: int) -> bool:
        return (self.colour[h] + self.colour[self.iota[h]]) % 2 == 1

    def flip(self, v: Vertex) -> "MobiusGraph":
        """Reverse the cyclic order at ``v`` and flip every colour there."""
        order = dict(self.order)
        order[v] = tuple(reversed(order[v]))
        colour = {h: (c + (self.lam[h] == v)) % 2 for h, c in self.colour.items()}
        return MobiusGraph(order, self.iota, colour, self.leg_labels)

    def __repr__(self):
        parts = []
        for v, hs in self.order.items():
            parts.append(f"{v}:" + ",".join(f"{h}{'~' if self.colour[h] else ''}" for h in hs))
        return f"MobiusGraph({' '.join(parts)}; ι={self.edges()})"

    # serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": [str(v) for v in self.vertices],
            "half_edges": [{"id": h, "vertex": str(self.lam[h]), "colour": self.colour[h]}
                           for h in self.half_edges],
            "iota": [list(e) for e in self.edges()],
            "cyclic_order": {str(v): list(hs) for v, hs in self.order.items()},
            "legs": {str(v): lab for v, lab in self.leg_labels.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MobiusGraph":
        try:
            iota = {}
            for a, b in data["iota"]:
                iota[int(a)], iota[int(b)] = int(b), int(a)
            order = {str(v): [int(h) for h in hs] for v, hs in data["cyclic_order"].items()}
            for v in data.get("vertices", []):
                order.setdefault(str(v), [])
            colour = {int(r["id"]): int(r.get("colour", 0)) for r in data.get("half_edges", [])}
            for r in data.get("half_edges", []):
                if str(r["vertex"]) not in order or int(r["id"]) not in order[str(r["vertex"])]:
                    raise GraphError(f"half-edge {r['id']} is not in the cyclic order of {r['vertex']}")
            legs = {str(v): int(x) for v, x in data.get("legs", {}).items()}
        except (KeyError, TypeError) as e:
            raise GraphError(f"malformed graph description: {e}") from None
        return cls(order, iota, colour, legs)


# contraction and reduction ----------------------------------------------------

def contract_edge(g: MobiusGraph, h: int) -> MobiusGraph:
    """Contract the edge containing half-edge ``h``.

    When the two colours differ the far endpoint is flipped first.
    """
    if h not in g.iota:
        raise GraphError(f"unknown half-edge {h}")
    k = g.iota[h]
    if g.is_loop(h):
        raise LoopContraction(f"edge {{{h},{k}}} is a loop")
    if not g.is_internal(h):
        raise ExternalEdge(f"edge {{{h},{k}}} ends at a leg")
    v, w = g.lam[h], g.lam[k]
    if g.twisted(h):
        g = g.flip(w)
    a, b = g.order[v], g.order[w]
    i, j = a.index(h), b.index(k)
    merged = a[i + 1:] + a[:i] + b[j + 1:] + b[:j]
    order = {x: hs for x, hs in g.order.items() if x != w}
    order[v] = merged
    iota = {x: y for x, y in g.iota.items() if x not in (h, k)}
    colour = {x: c for x, c in g.colour.items() if x not in (h, k)}
    return MobiusGraph(order, iota, colour, g.leg_labels)


def is_reduced(g: MobiusGraph) -> bool:
    return all(len(hs) == 1 or len(hs) >= 3 for hs in g.order.values())


def _bivalent_candidates(g: MobiusGraph) -> List[int]:
    out = []
    for v, hs in g.order.items():
        if len(hs) == 2:
            for h in hs:
                if not g.is_loop(h) and g.is_internal(h):
                    out.append(h)
    return out


def reduce(g: MobiusGraph, rng: Optional[random.Random] = None) -> MobiusGraph:
    """Contract edges at bivalent vertices until the graph is reduced.

    ``rng`` randomizes the contraction order (the result is the same up to
    isomorphism).
    """
    if not is_reduced(g) and all(len(hs) <= 2 for hs in g.order.values()):
        raise NotReducible("no vertex of valence at least 3")
    while not is_reduced(g):
        cand = _bivalent_candidates(g)
        if not cand:
            raise NotReducible("a bivalent vertex has no contractible edge")
        g = contract_edge(g, rng.choice(cand) if rng else cand[0])
    return g


# isomorphism --------------------------------------------------------------------

@dataclass(frozen=True)
class Isomorphism:
    vertices: Dict[Vertex, Vertex]
    half_edges: Dict[int, int]
    flips: Dict[Vertex, int]  # 1 where the cyclic order is reversed


def _propagate(g1: MobiusGraph, g2: MobiusGraph, h0: int, k0: int, s0: int,
               hmap: Dict[int, int], vmap: Dict, flips: Dict, used_v: set) -> bool:
    """Extend a partial map from ``h0 ↦ k0`` with orientation ``s0``; False on conflict."""
    todo = [(h0, k0, s0)]
    while todo:
        h, k, s = todo.pop()
        v, w = g1.lam[h], g2.lam[k]
        if v in vmap:
            if vmap[v] != w or flips[v] != s or hmap.get(h) != k:
                return False
            continue
        if w in used_v:
            return False
        n = len(g1.order[v])
        if len(g2.order[w]) != n:
            return False
        if g1.leg_labels.get(v) != g2.leg_labels.get(w):
            return False
        vmap[v], flips[v] = w, s
        used_v.add(w)
        for i in range(n):
            hh = g1.succ(h, i)
            kk = g2.succ(k, -i if s else i)
            if hh in hmap and hmap[hh] != kk:
                return False
            if kk in hmap.values() and hmap.get(hh) != kk:
                return False
            hmap[hh] = kk
        for i in range(n):
            hh = g1.succ(h, i)
            kk = hmap[hh]
            h2, k2 = g1.iota[hh], g2.iota[kk]
            # twists match up to the orientation choices at both ends
            s2 = (int(g1.twisted(hh)) + int(g2.twisted(kk)) + s) % 2
            if h2 in hmap:
                if hmap[h2] != k2 or flips.get(g1.lam[h2]) != s2:
                    return False
            else:
                todo.append((h2, k2, s2))
    return True


def is_isomorphic(g1: MobiusGraph, g2: MobiusGraph) -> Tuple[bool, Optional[Isomorphism]]:
    if len(g1.half_edges) != len(g2.half_edges) or len(g1.vertices) != len(g2.vertices):
        return False, None
    if sorted(len(x) for x in g1.order.values()) != sorted(len(x) for x in g2.order.values()):
        return False, None
    if sorted(g1.leg_labels.values()) != sorted(g2.leg_labels.values()):
        return False, None
    comps = sorted(g1.components(), key=len, reverse=True)

    def search(ci: int, hmap, vmap, flips, used_v):
        if ci == len(comps):
            return Isomorphism(dict(vmap), dict(hmap), dict(flips))
        comp = comps[ci]
        # anchor at a half-edge of a vertex of maximal valence
        v0 = max(comp, key=lambda v: len(g1.order[v]))
        if not g1.order[v0]:
            for w in g2.vertices:
                if w not in used_v and not g2.order[w]:
                    res = search(ci + 1, hmap, {**vmap, v0: w}, {**flips, v0: 0}, used_v | {w})
                    if res:
                        return res
            return None
        h0 = g1.order[v0][0]
        for k0 in g2.half_edges:
            if g2.lam[k0] in used_v or len(g2.order[g2.lam[k0]]) != len(g1.order[v0]):
                continue
            for s0 in (0, 1):
                hm, vm, fl, uv = dict(hmap), dict(vmap), dict(flips), set(used_v)
                if _propagate(g1, g2, h0, k0, s0, hm, vm, fl, uv):
                    res = search(ci + 1, hm, vm, fl, uv)
                    if res:
                        return res
        return None

    iso = search(0, {}, {}, {}, set())
    return (iso is not None), iso


# thickening ----------------------------------------------------------------------

@dataclass(frozen=True)
class TopologicalType:
    g: int
    u: int
    h: int

    def __post_init__(self):
        if self.g < 0 or self.h < 0 or self.u not in (0, 1, 2):
            raise ValueError(f"invalid topological type {self}")

    @classmethod
    def from_euler(cls, chi: int, h: int, orientable: bool) -> "TopologicalType":
        if orientable:
            return cls((2 - h - chi) // 2, 0, h)
        k = 2 - h - chi
        u = 1 if k % 2 else 2
        return cls((k - u) // 2, u, h)

    @property
    def euler(self) -> int:
        return 2 - 2 * self.g - self.u - self.h

    def __iter__(self):
        return iter((self.g, self.u, self.h))


def boundary_components(g: MobiusGraph) -> int:
    """Boundary walks of the thickened graph.

    A state is a half-edge with a direction; crossing a twisted edge reverses
    the direction.  Each boundary circle is traced once in each direction.
    """
    seen = set()
    orbits = 0
    for h0 in g.half_edges:
        for o0 in (1, -1):
            if (h0, o0) in seen:
                continue
            orbits += 1
            h, o = h0, o0
            while (h, o) not in seen:
                seen.add((h, o))
                k = g.iota[h]
                if g.twisted(h):
                    o = -o
                h = g.succ(k, o)
    return orbits // 2


def is_orientable(g: MobiusGraph) -> bool:
    side: Dict[Vertex, int] = {}
    for comp in g.components():
        side[comp[0]] = 0
        stack = [comp[0]]
        while stack:
            v = stack.pop()
            for h in g.order[v]:
                w, t = g.lam[g.iota[h]], int(g.twisted(h))
                want = (side[v] + t) % 2
                if w not in side:
                    side[w] = want
                    stack.append(w)
                elif side[w] != want:
                    return False
    return True


def thicken_type(g: MobiusGraph) -> TopologicalType:
    if g.legs():
        raise LegsUnsupported("thickening is only defined here for graphs without legs")
    if len(g.components()) != 1:
        raise Disconnected("thickening needs a connected graph")
    chi = len(g.vertices) - len(g.edges())
    return TopologicalType.from_euler(chi, boundary_components(g), is_orientable(g))


EMPTY_MODULI = frozenset({(0, 0, 1, 0), (0, 0, 1, 1), (0, 0, 1, 2), (0, 0, 2, 0), (0, 1, 1, 0)})


def is_moduli_nonempty(g: int, u: int, h: int, n: int) -> bool:
    if min(g, u, h, n) < 0 or u > 2:
        raise ValueError("need g, u, h, n ≥ 0 and u ≤ 2")
    return (g, u, h, n) not in EMPTY_MODULI


# examples and fuzzing ---------------------------------------------------------------

def loop_graph(twisted: bool) -> MobiusGraph:
    """One bivalent vertex with a single loop: annulus, or Möbius band when twisted."""
    return MobiusGraph({"v": (0, 1)}, {0: 1, 1: 0}, {0: 0, 1: int(twisted)})


def theta_graph(same_order: bool = False) -> MobiusGraph:
    order = {"u": (0, 1, 2), "v": (3, 4, 5) if same_order else (3, 5, 4)}
    return MobiusGraph(order, {0: 3, 3: 0, 1: 4, 4: 1, 2: 5, 5: 2})


def subdivide(g: MobiusGraph, h: int) -> MobiusGraph:
    """Insert a bivalent vertex in the middle of the edge at ``h``."""
    k = g.iota[h]
    a, b = max(g.half_edges) + 1, max(g.half_edges) + 2
    name = f"s{a}"
    while name in g.order:
        name += "'"
    order = dict(g.order)
    order[name] = (a, b)
    iota = dict(g.iota)
    iota.update({h: a, a: h, k: b, b: k})
    colour = dict(g.colour)
    # h-a stays untwisted, b-k carries the original twist
    colour[a], colour[b] = g.colour[h], (g.colour[k] + int(g.twisted(h))) % 2
    return MobiusGraph(order, iota, colour, g.leg_labels)


def corolla(n: int, colours: Optional[Sequence[int]] = None) -> MobiusGraph:
    """A vertex with ``n`` legs attached."""
    order = {"c": tuple(range(0, 2 * n, 2))}
    iota, legs = {}, {}
    for i in range(n):
        order[f"l{i + 1}"] = (2 * i + 1,)
        iota[2 * i], iota[2 * i + 1] = 2 * i + 1, 2 * i
        legs[f"l{i + 1}"] = i + 1
    colour = {2 * i: (colours[i] if colours else 0) for i in range(n)}
    return MobiusGraph(order, iota, colour, legs)


def random_mobius_graph(rng: random.Random, max_half_edges: int = 12, legs: bool = True,
                        connected: bool = False) -> MobiusGraph:
    """Random Möbius graph; univalent vertices become labelled legs."""
    while True:
        m = rng.randint(1, max_half_edges // 2)
        hs = list(range(2 * m))
        nv = rng.randint(1, 2 * m)
        attach = {h: (h if h < nv else rng.randrange(nv)) for h in hs}
        if not legs and any(list(attach.values()).count(v) == 1 for v in range(nv)):
            continue
        rng.shuffle(hs)
        iota = {}
        for i in range(0, 2 * m, 2):
            iota[hs[i]], iota[hs[i + 1]] = hs[i + 1], hs[i]
        order: Dict[Vertex, List[int]] = {v: [] for v in range(nv)}
        for h in rng.sample(range(2 * m), 2 * m):
            order[attach[h]].append(h)
        lg = {v: i + 1 for i, v in enumerate(v for v in order if len(order[v]) == 1)}
        g = MobiusGraph(order, iota, {h: rng.randint(0, 1) for h in range(2 * m)}, lg)
        if connected and len(g.components()) != 1:
            continue
        return g


def relabel(g: MobiusGraph, rng: random.Random, flip_prob: float = 0.5) -> MobiusGraph:
    """An isomorphic copy: renamed vertices and half-edges, rotated orders, random flips."""
    hs = list(g.half_edges)
    perm = dict(zip(hs, rng.sample(hs, len(hs))))
    vn = {v: f"w{i}" for i, v in enumerate(rng.sample(list(g.vertices), len(g.vertices)))}
    order = {}
    for v, seq in g.order.items():
        seq = [perm[h] for h in seq]
        if seq:
            r = rng.randrange(len(seq))
            seq = seq[r:] + seq[:r]
        order[vn[v]] = seq
    new = MobiusGraph(order, {perm[a]: perm[b] for a, b in g.iota.items()},
                      {perm[h]: c for h, c in g.colour.items()},
                      {vn[v]: lab for v, lab in g.leg_labels.items()})
    for v in list(new.vertices):
        if rng.random() < flip_prob:
            new = new.flip(v)
    return new
