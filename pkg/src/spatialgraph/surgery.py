"""Band sums of handcuff diagrams and the twisted generator families."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (VPORT, XPORT, Diagram, DiagramError, HandcuffDiagram, P4Diagram, PortMap,
                      _chain_passes, parallel_replace, restrict, smooth_degree2, twist_region,
                      underlying_graph)
from .drawing import build

__all__ = ["DSumRecord", "d_sum", "band_twist", "gen_hrs", "gen_frs", "KNOT_LABEL"]

KNOT_LABEL = "K"


@dataclass(frozen=True)
class DSumRecord:
    knot: Diagram
    source: HandcuffDiagram
    twist: int
    half_twist: bool
    origin: tuple[tuple[int, int | None], ...]  # knot crossing -> crossing of f (None: band twist)

    @property
    def origin_map(self) -> dict[int, int | None]:
        return dict(self.origin)


def _sides(m: PortMap, key: tuple, arc: int, want_tail: bool):
    arcs = m.slots[key]
    for i, a in enumerate(arcs):
        if a == arc and (m.ends[a][0] == (key, i)) == want_tail:
            n = len(arcs)
            return i, [((key, (i + 1) % n)), ((key, (i + 2) % n))]
    raise DiagramError("edge end not found at vertex")


def d_sum(f: HandcuffDiagram, twist: int = 0) -> DSumRecord:
    """Blackboard band sum of the two loops along the joining edge.

    The edge is doubled into two parallel strands; at each end the small
    loop arc between the band's feet is removed.  When the planar band
    would join the loops with clashing orientations, one half twist is
    added next to the second loop.  ``twist`` adds full twists to the band
    next to the first loop.
    """
    d = f.diagram
    g = underlying_graph(d)
    u, v = g.edge(f.edge)
    m = PortMap.from_diagram(d)
    ukey, vkey = (VPORT, u), (VPORT, v)
    first = next(a for a, lab in sorted(m.label.items())
                 if lab == f.edge and m.ends[a][0] is not None and m.ends[a][0][0] == ukey)
    last = _chain_passes(m, first)[0][-1]
    _, (p1, p2) = _sides(m, ukey, first, True)
    _, (q1, q2) = _sides(m, vkey, last, False)
    s1, s2 = m.port_arc(p1), m.port_arc(p2)
    xa, ya = m.port_arc(q1), m.port_arc(q2)
    s1_in = m.ends[s1][1] == p1
    s2_in = m.ends[s2][1] == p2
    y_out = m.ends[ya][0] == q2
    strands = [(KNOT_LABEL, s1_in), (KNOT_LABEL, s2_in)]
    coherent = s1_in == y_out
    old_x = {k for k in m.slots if k[0] == XPORT}
    for arc, port in ((s1, p1), (s2, p2), (xa, q1), (ya, q2)):
        for w in (0, 1):
            if m.ends[arc][w] == port:
                m.ends[arc][w] = None
    starts, ends = parallel_replace(m, first, strands, origin_tag=lambda node: node[1])
    del m.slots[ukey]
    del m.slots[vkey]

    def link(arc_a, arc_b, fwd):
        # connect two loose ends of one strand; ``arc_a`` precedes ``arc_b`` when fwd
        return m.join(arc_a, arc_b) if fwd else m.join(arc_b, arc_a)

    u_side = starts
    if twist:
        bottom, top = twist_region(m, strands, 2 * twist)
        for t in range(2):
            link(top[t], starts[t], strands[t][1])
        u_side = bottom
    for t, loop_arc in enumerate((s1, s2)):
        link(loop_arc, u_side[t], strands[t][1])
    v_side, v_dirs = ends, [strands[0][1], strands[1][1]]
    if not coherent:
        bottom, top = twist_region(m, strands, 1)
        for t in range(2):
            link(ends[t], bottom[t], strands[t][1])
        v_side, v_dirs = top, [strands[1][1], strands[0][1]]
    link(v_side[0], ya, v_dirs[0])
    link(v_side[1], xa, v_dirs[1])
    for a in m.label:
        m.label[a] = KNOT_LABEL
    m.roles = {}
    knot = m.to_diagram()
    origin = []
    for x in knot.crossings:
        key = (XPORT, x.id)
        if key in old_x:
            origin.append((x.id, x.id))
        else:
            origin.append((x.id, m.origin.get(key)))
    return DSumRecord(knot, f, twist, not coherent, tuple(origin))


def band_twist(rec: DSumRecord, k: int) -> DSumRecord:
    """The band sum with ``k`` further full twists in the band."""
    if k == 0:
        return rec
    return d_sum(rec.source, rec.twist + k)


# ---------------------------------------------------------------- generators

def _sgn(k: int) -> int:
    return 1 if k >= 0 else -1


def _zigzag(x0: int, n: int, y_even, y_odd, step=1):
    """Points of a strand alternating between two heights along x."""
    return [(x0 + step * i, y_even if i % 2 == 0 else y_odd) for i in range(n + 1)]


def gen_hrs(r: int, s: int) -> P4Diagram:
    """Four circles in a row; |r| full twists between c2 and c4, |s| between c1 and c3.

    Vertices u, w, x sit on a horizontal line.  c1 = e5 is a loop at u, c4 =
    e6 a loop at x; c2 = e1 (u to w, below) and e2 (w to u, above); c3 = e3
    (w to x, above) and e4 (x to w, below).  A finger of e2 runs above c3
    and twists with the top of c4; a finger of e4 runs below c2 and twists
    with the bottom of c1.
    """
    nr, ns = 2 * abs(r), 2 * abs(s)
    V = {"u": (0, 0), "w": (10, 0), "x": (20, 0)}
    e1 = [(0, 0), (2, -3), (8, -3), (10, 0)]
    e3 = [(10, 0), (12, 3), (18, 3), (20, 0)]
    # c4 and the upper finger of e2
    right = 22 + nr
    q = _zigzag(22, nr, 5, 6)
    e6 = [(20, 0), (21, 5)] + q + [(right + 1, 5), (right + 1, -3), (21, -3), (20, 0)]
    p = _zigzag(22, nr, 6, 5)[::-1]
    e2_fwd = [(0, 0), (2, 3), (3, 3), (3, 7), (right + 0.5, 7), (right + 0.5, 6)] + p + \
        [(5, 6), (5, 3), (8, 3), (10, 0)]
    e2 = e2_fwd[::-1]
    # c1 and the lower finger of e4
    left = -2 - ns
    q1 = _zigzag(-2, ns, -5, -6, step=-1)
    e5 = [(0, 0), (-1, -5)] + q1 + [(left - 1, -5), (left - 1, 3), (-1, 3), (0, 0)]
    p1 = _zigzag(-2, ns, -6, -5, step=-1)
    e4_fwd = [(10, 0), (12, -3), (15, -3), (15, -6)] + p1 + \
        [(left - 0.5, -6), (left - 0.5, -7), (17, -7), (17, -3), (18, -3), (20, 0)]
    e4 = e4_fwd[::-1]
    from fractions import Fraction

    def fr(pts):
        return [(Fraction(x), Fraction(y)) for x, y in pts]

    def rule(pa, pb):
        pair = {pa.edge, pb.edge}
        if pair == {"e2", "e6"}:
            return ("sign", _sgn(r))
        if pair == {"e4", "e5"}:
            return ("sign", _sgn(s))
        raise DiagramError(f"unexpected crossing {pair}")

    edges = [("e1", "u", fr(e1), "w"), ("e2", "w", fr(e2), "u"), ("e3", "w", fr(e3), "x"),
             ("e4", "x", fr(e4), "w"), ("e5", "u", fr(e5), "u"), ("e6", "x", fr(e6), "x")]
    roles = {e: e for e in ("e1", "e2", "e3", "e4", "e5", "e6")}
    d = build(V, edges, rule, roles)
    return P4Diagram.from_diagram(d)


def gen_frs(r: int, s: int) -> HandcuffDiagram:
    """Handcuff diagram: h_{r,s} restricted to H24 with the middle vertex suppressed."""
    from .invariants import handcuff_of

    return handcuff_of(gen_hrs(r, s), 2, 4)
