"""Reusable diagrams: standard knots and links, random embeddings, handcuff fixtures."""

from __future__ import annotations

import json
import random
from importlib import resources

from .diagram import Crossing, Diagram, DiagramError, HandcuffDiagram, P4Diagram, parse
from .drawing import DrawingError, build, random_straight, straight_graph
from .graphcore import MultiGraph, complete_graph, star_connect

HOPF_POSITIVE = """sgd 1
# two components, both crossings positive
x 1 1 +3 2 -4
x 2 3 +1 4 -2
label 1 a
label 2 a
label 3 b
label 4 b
"""

TREFOIL = """sgd 1
x 1 1 +5 2 -4
x 2 3 +1 4 -6
x 3 5 +3 6 -2
"""

FIGURE_EIGHT = """sgd 1
x 1 4 +2 5 -1
x 2 8 +6 1 -5
x 3 6 3 7 4
x 4 2 7 3 8
"""

UNKNOT = """sgd 1
arc 1
"""


def from_pd(pd, label: str = "k") -> Diagram:
    """Knot from a KnotTheory-style PD code on arcs 1..2n (over direction from consecutive labels)."""
    n = 2 * len(pd)
    xs = []
    for i, (a, b, c, d) in enumerate(pd, 1):
        b_in = d == b % n + 1
        if not b_in and b != d % n + 1:
            raise DiagramError(f"PD crossing {i}: over-strand labels are not consecutive")
        xs.append(Crossing(i, (a, b, c, d), b_in))
    return Diagram(tuple(xs), (), tuple((a, label) for a in range(1, n + 1)))


def knot_table() -> list[dict]:
    """Knots up to nine crossings with their Conway coefficients (from KnotInfo)."""
    path = resources.files("spatialgraph").joinpath("data/knots_le9.json")
    return json.loads(path.read_text())


def standard(name: str) -> Diagram:
    return parse({"hopf": HOPF_POSITIVE, "trefoil": TREFOIL, "figure8": FIGURE_EIGHT,
                  "unknot": UNKNOT}[name])


# ---------------------------------------------------------------- handcuffs

def _handcuff(loop1, edge, loop2, va, vb, rule=None) -> HandcuffDiagram:
    d = build({"A": va, "B": vb},
              [("g1", "A", loop1, "A"), ("e", "A", edge, "B"), ("g2", "B", loop2, "B")],
              rule, {"loop1": "g1", "loop2": "g2", "edge": "e"})
    return HandcuffDiagram.from_diagram(d)


def trivial_handcuff() -> HandcuffDiagram:
    return _handcuff([(0, 0), (-2, 2), (-4, 0), (-2, -2), (0, 0)],
                     [(0, 0), (10, 0)],
                     [(10, 0), (12, -2), (14, 0), (12, 2), (10, 0)], (0, 0), (10, 0))


def tie_handcuff(knot1: Diagram, knot2: Diagram | None = None) -> HandcuffDiagram:
    """Handcuff whose loops are the given knots, joined by a crossing-free edge.

    A vertex is inserted on the smallest arc of each knot and the two are
    joined inside adjacent faces, so the handcuff is reducible.
    """
    from .diagram import PortMap, VPORT, underlying_graph

    m = PortMap()
    offset = 0
    verts = []
    for idx, k in enumerate((knot1, knot2 if knot2 is not None else parse(UNKNOT))):
        sub = PortMap.from_diagram(k)
        ren = {a: a + offset for a in sub.ends}
        for key, arcs in sub.slots.items():
            nk = (key[0], key[1] + offset)
            m.slots[nk] = [ren[a] for a in arcs]
            m.under[nk] = sub.under[key]
        for a, (t, h) in sub.ends.items():
            m.ends[ren[a]] = [None if t is None else ((t[0][0], t[0][1] + offset), t[1]),
                              None if h is None else ((h[0][0], h[0][1] + offset), h[1])]
            m.label[ren[a]] = f"g{idx + 1}"
        first = min(ren.values())
        offset = max(ren.values()) + 1
        m._next_arc = offset
        m._next_x = offset
        # split ``first`` by a vertex: first -> V -> new
        key = (VPORT, "AB"[idx])
        new = m.new_arc(f"g{idx + 1}")
        head = m.ends[first][1]
        m.slots[key] = [None, None, None]
        if head is None:  # crossing-free circle
            m.attach(first, 1, (key, 0))
            m.attach(first, 0, (key, 2))
            m.delete_arc(new)
        else:
            m.ends[first][1] = None
            m.attach(new, 1, head)
            m.attach(first, 1, (key, 0))
            m.attach(new, 0, (key, 2))
        verts.append(key)
    e = m.new_arc("e")
    m.attach(e, 0, (verts[0], 1))
    m.attach(e, 1, (verts[1], 1))
    m.roles = {"loop1": "g1", "loop2": "g2", "edge": "e"}
    return HandcuffDiagram.from_diagram(m.to_diagram())


def clasp_handcuff(k: int) -> HandcuffDiagram:
    """Loops clasped with ``k`` full twists (|k| <= 4): lk(L) = k."""
    n = 2 * abs(k)
    want = 1 if k >= 0 else -1
    # loop1 runs right along y=1 to the twist region; loop2 runs left along y=0
    top = [(4 + i, 1 if i % 2 == 0 else 0) for i in range(n + 1)]
    bot = [(4 + i, 0 if i % 2 == 0 else 1) for i in range(n + 1)][::-1]
    loop1 = [(0, 0), (2, 1)] + top + [(5 + n, 1), (5 + n, 4), (-2, 4), (-2, -1), (0, 0)]
    loop2 = [(20, 0), (19, -3), (3, -3), (3, 0)] + bot[::-1] + [(6 + n, 0), (18, -1), (20, 0)]

    def rule(pa, pb):
        return ("sign", want)

    return _handcuff(loop1, [(0, 0), (1, -5), (20, -5), (20, 0)], loop2, (0, 0), (20, 0), rule)


def random_handcuff(rng: random.Random, points: int = 4, tries: int = 100) -> HandcuffDiagram:
    """Projection of a random PL handcuff in space."""
    def pt():
        return (rng.randint(0, 60), rng.randint(0, 60), rng.randint(0, 60))

    for _ in range(tries):
        a, b = pt(), pt()
        loop1 = [a] + [pt() for _ in range(points)] + [a]
        loop2 = [b] + [pt() for _ in range(points)] + [b]
        edge = [a] + [pt() for _ in range(max(1, points - 2))] + [b]
        try:
            return _handcuff(loop1, edge, loop2, a, b)
        except DrawingError:
            continue
    raise DrawingError("no generic random handcuff found")


# ---------------------------------------------------------------- K6 families

def k6_random(rng: random.Random) -> Diagram:
    return random_straight(complete_graph(6), rng)


def star_k6(rng: random.Random, attachment=None, separated: bool = True) -> Diagram:
    """Random linear embedding of K6 *3 K6.

    With ``separated`` the two K6 factors occupy disjoint boxes, so their
    cycles have zero linking numbers across factors.
    """
    g = star_connect(complete_graph(6), complete_graph(6), 3,
                     attachment or [("1", "1"), ("2", "2"), ("3", "3")])
    for _ in range(100):
        pts = {}
        for v in g.vertices:
            shift = 1200 if (separated and v.endswith("'")) else 0
            pts[v] = (shift + rng.randint(0, 1000), rng.randint(0, 1000), rng.randint(0, 1000))
        try:
            return straight_graph(pts, g.edges)
        except DrawingError:
            continue
    raise DrawingError("no generic embedding found")


def example_witnesses() -> dict[str, Diagram]:
    """Two pinned K6 *3 K6 embeddings playing the roles of the Example's f and g.

    ``f`` certifies by a linked triple and has no lk-split handcuff within
    the harness search; ``g`` certifies by an irreducible handcuff while
    every searched 3-cycle sublink is split-looking by linking numbers.
    """
    return {"f": star_k6(random.Random(1)), "g": star_k6(random.Random(3))}
