"""Build diagrams from piecewise-linear drawings.

A drawing places flat vertices at points in the plane and routes each edge
as a polyline.  Points may carry a third coordinate; the edge is then a
piecewise-linear curve in space and over/under information at a crossing is
read off from the heights, so the resulting diagram is the projection of an
actual embedding.  A ``crossing_rule`` callback may override this, either
by returning which strand is over or by asking for a sign.

Intersections are computed exactly with :class:`fractions.Fraction`;
degenerate positions (tangencies, triple points, a curve through a vertex)
raise :class:`DrawingError`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .diagram import Diagram, DiagramError, PortMap, VPORT, XPORT

Point = tuple


class DrawingError(DiagramError):
    pass


@dataclass(frozen=True)
class Pass:
    """One strand of a crossing: edge id, segment index, parameter, height, direction."""

    edge: str
    seg: int
    t: Fraction
    z: Fraction | None
    direction: tuple


@dataclass(frozen=True)
class EdgePath:
    id: str
    tail: str | None
    points: tuple
    head: str | None

    @property
    def closed(self) -> bool:
        return self.tail is None


def _xy(p):
    return Fraction(p[0]), Fraction(p[1])


def _z(p):
    return Fraction(p[2]) if len(p) > 2 else None


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _angle(d):
    return math.atan2(float(d[1]), float(d[0]))


def build(vertices: dict[str, Point], edges: Sequence, crossing_rule: Callable | None = None,
          roles: dict[str, str] | None = None) -> Diagram:
    """Diagram of a drawing.

    ``edges`` holds ``(edge_id, tail, points, head)`` tuples; ``points``
    starts at the tail vertex and ends at the head vertex.  ``tail = head =
    None`` marks a closed curve whose first and last points coincide.

    ``crossing_rule(p, q)`` receives two :class:`Pass` objects and returns
    ``True`` if ``p`` is over, ``False`` if ``q`` is over, or ``("sign",
    +1/-1)`` to request a crossing sign.  ``None`` (or no rule) falls back to
    the heights.
    """
    paths = [EdgePath(e, t, tuple(pts), h) for e, t, pts, h in edges]
    for p in paths:
        if len(p.points) < 2:
            raise DrawingError(f"edge {p.id}: polyline needs two points")
        if p.closed:
            if p.head is not None or _xy(p.points[0]) != _xy(p.points[-1]):
                raise DrawingError(f"closed edge {p.id} must start and end at the same point")
        else:
            if p.tail not in vertices or p.head not in vertices:
                raise DrawingError(f"edge {p.id}: unknown endpoint")
            if _xy(p.points[0]) != _xy(vertices[p.tail]) or _xy(p.points[-1]) != _xy(vertices[p.head]):
                raise DrawingError(f"edge {p.id}: polyline must start/end at its vertices")
    segs = []  # (edge index, seg index, p0, p1, z0, z1)
    for ei, p in enumerate(paths):
        for si in range(len(p.points) - 1):
            a, b = p.points[si], p.points[si + 1]
            if _xy(a) == _xy(b):
                raise DrawingError(f"edge {p.id}: zero-length segment")
            segs.append((ei, si, _xy(a), _xy(b), _z(a), _z(b)))
    vpoints = {_xy(v) for v in vertices.values()}
    if len(vpoints) != len(vertices):
        raise DrawingError("two vertices share a position")

    crossings = []  # (pass_a, pass_b, point)
    for i in range(len(segs)):
        ei, si, a0, a1, za0, za1 = segs[i]
        for j in range(i + 1, len(segs)):
            ej, sj, b0, b1, zb0, zb1 = segs[j]
            hit = _intersect(a0, a1, b0, b1)
            if hit is None:
                continue
            kind, t, u, pt = hit
            if kind == "proper":
                za = None if za0 is None else za0 + t * (za1 - za0)
                zb = None if zb0 is None else zb0 + u * (zb1 - zb0)
                pa = Pass(paths[ei].id, si, t, za, (a1[0] - a0[0], a1[1] - a0[1]))
                pb = Pass(paths[ej].id, sj, u, zb, (b1[0] - b0[0], b1[1] - b0[1]))
                crossings.append((pa, pb, pt))
                continue
            if kind == "overlap":
                raise DrawingError(f"edges {paths[ei].id} and {paths[ej].id} overlap")
            # touching at an endpoint: only allowed at shared polyline joints or vertices
            if not (t in (0, 1) and u in (0, 1)):
                raise DrawingError(f"edges {paths[ei].id} and {paths[ej].id} touch at {tuple(map(float, pt))}")
            if ei == ej and _adjacent(paths[ei], si, sj, t, u):
                continue
            if pt in vpoints and _at_vertex(paths[ei], si, t, pt, vertices) and \
                    _at_vertex(paths[ej], sj, u, pt, vertices):
                continue
            raise DrawingError(f"edges {paths[ei].id} and {paths[ej].id} meet at {tuple(map(float, pt))}")
    pts = [c[2] for c in crossings]
    if len(set(pts)) != len(pts):
        raise DrawingError("three strands through one point")

    m = PortMap()
    # crossing nodes; slot 0 is the incoming under ray
    on_edge: dict[str, list] = {p.id: [] for p in paths}
    for n, (pa, pb, pt) in enumerate(crossings, 1):
        over_a = _decide(pa, pb, crossing_rule)
        under, over = (pb, pa) if over_a else (pa, pb)
        du, do = under.direction, over.direction
        rays = [("u", 0, (-du[0], -du[1])), ("o", None, do), ("u", 1, du), ("o", None, (-do[0], -do[1]))]
        # ccw order starting from the incoming under ray
        base = _angle(rays[0][2])
        order = sorted(rays, key=lambda r: (_angle(r[2]) - base) % (2 * math.pi))
        key = (XPORT, n)
        m.slots[key] = [None] * 4
        m.under[key] = 0
        over_out_slot = 1 if order[1][2] == do else 3
        on_edge[under.edge].append((under.seg, under.t, key, 0, 2))
        on_edge[over.edge].append((over.seg, over.t, key, 4 - over_out_slot, over_out_slot))
    m._next_x = len(crossings) + 1
    # vertex rotations
    ends: dict[str, list] = {v: [] for v in vertices}
    for p in paths:
        if p.closed:
            continue
        a, b = _xy(p.points[0]), _xy(p.points[1])
        ends[p.tail].append((_angle((b[0] - a[0], b[1] - a[1])), p.id, 0))
        a, b = _xy(p.points[-1]), _xy(p.points[-2])
        ends[p.head].append((_angle((b[0] - a[0], b[1] - a[1])), p.id, 1))
    vslot: dict[tuple, tuple] = {}
    for v, lst in ends.items():
        lst.sort()
        for k in range(len(lst) - 1):
            if lst[k][0] == lst[k + 1][0]:
                raise DrawingError(f"vertex {v}: two edges leave in the same direction")
        m.slots[(VPORT, v)] = [None] * len(lst)
        for i, (_, eid, which) in enumerate(lst):
            vslot[(eid, which)] = ((VPORT, v), i)
    # arcs
    for p in paths:
        passes = sorted(on_edge[p.id], key=lambda r: (r[0], r[1]))
        if p.closed:
            if not passes:
                m.new_arc(p.id)
                continue
            for k in range(len(passes)):
                a = m.new_arc(p.id)
                prev, nxt = passes[k - 1], passes[k]
                m.attach(a, 0, (prev[2], prev[4]))
                m.attach(a, 1, (nxt[2], nxt[3]))
            continue
        ports = [vslot[(p.id, 0)]] + [x for r in passes for x in ((r[2], r[3]), (r[2], r[4]))] + \
                [vslot[(p.id, 1)]]
        for k in range(0, len(ports), 2):
            a = m.new_arc(p.id)
            m.attach(a, 0, ports[k])
            m.attach(a, 1, ports[k + 1])
    if roles:
        m.roles = dict(roles)
    return m.to_diagram()


def _decide(pa: Pass, pb: Pass, rule) -> bool:
    res = rule(pa, pb) if rule else None
    if isinstance(res, tuple) and res[0] == "sign":
        want = res[1]
        # sign with a over: under b runs right-to-left along a iff cross(da, db) > 0
        s = _cross(*pa.direction, *pb.direction)
        return (s > 0) == (want > 0)
    if res is not None:
        return bool(res)
    if pa.z is None or pb.z is None or pa.z == pb.z:
        raise DrawingError(f"no over/under information for {pa.edge} x {pb.edge}")
    return pa.z > pb.z


def _intersect(a0, a1, b0, b1):
    rx, ry = a1[0] - a0[0], a1[1] - a0[1]
    sx, sy = b1[0] - b0[0], b1[1] - b0[1]
    den = _cross(rx, ry, sx, sy)
    qpx, qpy = b0[0] - a0[0], b0[1] - a0[1]
    if den == 0:
        if _cross(qpx, qpy, rx, ry) != 0:
            return None
        # collinear: overlap in more than a point?
        rr = rx * rx + ry * ry
        t0 = (qpx * rx + qpy * ry) / rr
        t1 = t0 + (sx * rx + sy * ry) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > 1:
            return None
        if hi == 0 or lo == 1:
            t = Fraction(0) if hi == 0 else Fraction(1)
            pt = a0 if t == 0 else a1
            u = Fraction(0) if pt == b0 else Fraction(1)
            return ("touch", t, u, pt)
        return ("overlap", None, None, None)
    t = _cross(qpx, qpy, sx, sy) / den
    u = _cross(qpx, qpy, rx, ry) / den
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    pt = (a0[0] + t * rx, a0[1] + t * ry)
    if 0 < t < 1 and 0 < u < 1:
        return ("proper", t, u, pt)
    return ("touch", t, u, pt)


def _adjacent(p: EdgePath, si: int, sj: int, t, u) -> bool:
    n = len(p.points) - 1
    if abs(si - sj) == 1:
        lo, hi = min(si, sj), max(si, sj)
        # joint point is end of lo, start of hi
        tl, th = (t, u) if si == lo else (u, t)
        return tl == 1 and th == 0
    if p.closed and {si, sj} == {0, n - 1}:
        t0, tn = (t, u) if si == 0 else (u, t)
        return t0 == 0 and tn == 1
    return False


def _at_vertex(p: EdgePath, si: int, t, pt, vertices) -> bool:
    if p.closed:
        return False
    n = len(p.points) - 1
    if si == 0 and t == 0 and _xy(vertices[p.tail]) == pt:
        return True
    return si == n - 1 and t == 1 and _xy(vertices[p.head]) == pt


# ---------------------------------------------------------------- generators

def straight_graph(points: dict[str, Point], edges: Sequence[tuple[str, str, str]],
                   crossing_rule=None, roles=None) -> Diagram:
    """Straight-line drawing of a simple graph with vertices at 3D points."""
    return build(points, [(e, u, [points[u], points[v]], v) for e, u, v in edges],
                 crossing_rule, roles)


def k6_points_standard() -> dict[str, Point]:
    """Six points whose straight K6 drawing has three crossings."""
    return {"1": (0, 24, 0), "2": (-21, -12, 0), "3": (21, -12, 0),
            "4": (5, -2, 1), "5": (1, 7, 7), "6": (-5, -5, 1)}


def k6_standard() -> Diagram:
    from .graphcore import complete_graph
    g = complete_graph(6)
    return straight_graph(k6_points_standard(), g.edges)


def random_points(names: Sequence[str], rng: random.Random, box=(0, 1000), dz=1000,
                  offset=(0, 0)) -> dict[str, Point]:
    return {v: (offset[0] + rng.randint(*box), offset[1] + rng.randint(*box), rng.randint(0, dz))
            for v in names}


def random_straight(g, rng: random.Random, tries: int = 50, **kw) -> Diagram:
    """Random linear embedding of ``g`` (projected straight-line drawing)."""
    for _ in range(tries):
        pts = random_points(g.vertices, rng, **kw)
        try:
            return straight_graph(pts, g.edges)
        except DrawingError:
            continue
    raise DrawingError("could not find a generic position")


def random_knot(n_points: int, rng: random.Random, tries: int = 50) -> Diagram:
    """Projection of a random closed polygon in space (one component)."""
    for _ in range(tries):
        pts = [(rng.randint(0, 1000), rng.randint(0, 1000), rng.randint(0, 1000)) for _ in range(n_points)]
        pts.append(pts[0])
        try:
            return build({}, [("k", None, pts, None)])
        except DrawingError:
            continue
    raise DrawingError("could not find a generic polygon")
