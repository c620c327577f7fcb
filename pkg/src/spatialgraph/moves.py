"""Local rewriting: Reidemeister moves, the Delta move and twist insertion.

Sites are read off the faces of the diagram.  A face is a cyclic list of
darts ``(arc, forward)`` traversed with the face on the right.  Removal
moves (``r1-``, ``r2-``) and the triangle moves (``r3``, ``delta``) match
monogons, bigons and triangles; insertion moves (``r1+``, ``r2+``,
``twist``) take arcs on a common face.

R3 and Delta share one rewrite: the three strands of a triangle face are
slid across each other, keeping every pairwise over/under relation.  On a
triangle where one strand is over at both of its crossings this is R3; on
a cyclic triangle (each strand over exactly once) it is the Delta move.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .diagram import (XPORT, Diagram, DiagramError, PortMap, _arc_ends, faces, twist_region)

__all__ = ["MoveSite", "StaleSite", "KINDS", "find_sites", "apply", "insert_twists",
           "random_moves"]

KINDS = ("r1+", "r1-", "r2+", "r2-", "r3", "delta", "twist")


class StaleSite(DiagramError):
    pass


@dataclass(frozen=True)
class MoveSite:
    kind: str
    darts: tuple  # face darts identifying the local disk
    crossings: tuple = ()
    option: tuple = ()  # r1+: (side, under); r2+: (first_over,)

    def to_json(self) -> dict:
        return {"kind": self.kind, "darts": [list(d) for d in self.darts],
                "crossings": list(self.crossings), "option": list(self.option)}


def _xnode(d: Diagram):
    return {x.id: x for x in d.crossings}


def _end_node(ends, arc, fwd):
    p = ends[arc][1 if fwd else 0]
    return p


def _rotate_min(darts):
    k = min(range(len(darts)), key=lambda i: darts[i][0])
    return tuple(darts[k:] + darts[:k])


def _is_over(x, slot: int) -> bool:
    return slot % 2 == 1


def find_sites(d: Diagram, kind: str) -> list[MoveSite]:
    if kind not in KINDS:
        raise ValueError(f"unknown move kind {kind!r}")
    ends = _arc_ends(d)
    out = []
    fs = faces(d)
    if kind in ("r1-", "r2-", "r3", "delta"):
        for f in fs:
            info = _polygon(f, ends)
            if info is None:
                continue
            nodes, arr, dep = info
            if kind == "r1-" and len(f) == 1:
                out.append(MoveSite(kind, _rotate_min(f), tuple(nodes)))
            elif kind == "r2-" and len(f) == 2 and len(set(nodes)) == 2:
                # the strand through arcs f[0] must be over at both (or under at both)
                o0 = _is_over(None, dep[0])
                o1 = _is_over(None, arr[1])
                if o0 == o1:
                    out.append(MoveSite(kind, _rotate_min(f), tuple(nodes)))
            elif kind in ("r3", "delta") and len(f) == 3 and len(set(nodes)) == 3:
                # side k is the strand through dep[k] at nodes[k] and arr[k+1] at nodes[k+1]
                over_at = [(_is_over(None, dep[k]), _is_over(None, arr[(k + 1) % 3])) for k in range(3)]
                cyclic = all(a != b for a, b in over_at)
                if cyclic == (kind == "delta"):
                    out.append(MoveSite(kind, _rotate_min(f), tuple(nodes)))
        out.sort(key=lambda s: s.darts)
        return out
    if kind == "r1+":
        for a in sorted(d.label):
            if ends[a][0] is None:
                continue
            for side in ("left", "right"):
                for under in (True, False):
                    out.append(MoveSite(kind, ((a, True),), (), (side, under)))
        return out
    seen = set()
    for f in fs:
        for i in range(len(f)):
            for j in range(len(f)):
                if i == j or f[i][0] == f[j][0]:
                    continue
                key = (f[i], f[j])
                if key in seen:
                    continue
                seen.add(key)
                if kind == "r2+":
                    for first_over in (True, False):
                        out.append(MoveSite(kind, (f[i], f[j]), (), (first_over,)))
                elif i < j:
                    out.append(MoveSite(kind, (f[i], f[j])))
    out.sort(key=lambda s: (s.darts, s.option))
    return out


def _polygon(face, ends):
    """Crossing nodes around a face with arrival/departure slots; None if a vertex is involved."""
    nodes, arr, dep = [], [], []
    n = len(face)
    for k in range(n):
        arc, fwd = face[k]
        start = ends[arc][0 if fwd else 1]
        prev_arc, prev_fwd = face[k - 1]
        came = ends[prev_arc][1 if prev_fwd else 0]
        if start[0] != XPORT or came[:2] != start[:2]:
            return None
        nodes.append(start[1])
        arr.append(came[2])
        dep.append(start[2])
    return nodes, arr, dep


def _site_ok(d: Diagram, site: MoveSite) -> bool:
    if site.kind in ("r1-", "r2-", "r3", "delta"):
        return site in find_sites(d, site.kind)
    lab = d.label
    if any(a not in lab for a, _ in site.darts):
        return False
    if site.kind == "r1+":
        return True
    fs = faces(d)
    return any(site.darts[0] in f and site.darts[1] in f for f in fs)


def apply(d: Diagram, site: MoveSite, k: int = 1) -> Diagram:
    """Rewrite ``d`` at ``site``; ``k`` is the twist count for ``twist`` sites."""
    if not _site_ok(d, site):
        raise StaleSite(f"site {site.kind} {site.darts} does not match")
    m = PortMap.from_diagram(d)
    if site.kind == "r1-":
        _r1_remove(m, site)
    elif site.kind == "r1+":
        _r1_insert(m, site.darts[0][0], *site.option)
    elif site.kind == "r2-":
        for cid in site.crossings:
            _dissolve(m, (XPORT, cid))
    elif site.kind == "r2+":
        _r2_insert(m, site.darts[0], site.darts[1], site.option[0])
    elif site.kind in ("r3", "delta"):
        _triangle(m, site)
    elif site.kind == "twist":
        _twists(m, site.darts[0], site.darts[1], k)
    return m.to_diagram()


def insert_twists(d: Diagram, site: MoveSite, k: int) -> Diagram:
    """``k`` full twists (``2|k|`` crossings of sign ``sign(k)``) between two arcs of a face."""
    if k == 0:
        return d
    if site.kind != "twist":
        site = MoveSite("twist", site.darts)
    return apply(d, site, k)


# ---------------------------------------------------------------- rewrites

def _dissolve(m: PortMap, key):
    arcs = list(m.slots[key])
    pairs = []
    for s in (0, 1):
        a1, a2 = arcs[s], arcs[s + 2]
        inc, out = (a1, a2) if m.ends[a1][1] == (key, s) else (a2, a1)
        pairs.append((inc, out))
    m.remove_node(key)
    for inc, out in pairs:
        m.join(m.find(inc), m.find(out))


def _r1_remove(m: PortMap, site: MoveSite):
    key = (XPORT, site.crossings[0])
    kink = site.darts[0][0]
    arcs = m.slots[key]
    others = [(s, a) for s, a in enumerate(arcs) if a != kink]
    (s1, a1), (s2, a2) = others
    inc, out = (a1, a2) if m.ends[a1][1] == (key, s1) else (a2, a1)
    m.remove_node(key)
    m.delete_arc(kink)
    m.join(inc, out)


def _split(m: PortMap, arc: int):
    """Cut ``arc``; returns (first, second) pieces with loose head / loose tail."""
    head = m.ends[arc][1]
    if head is None:  # free circle: one piece with both ends loose
        return arc, arc
    new = m.new_arc(m.label[arc])
    m.detach(arc, 1)
    m.attach(new, 1, head)
    return arc, new


def _r1_insert(m: PortMap, arc: int, side: str, under: bool):
    S, E, N, W = 0, 1, 2, 3
    key = m.new_crossing(0 if under else 1)
    a1, a2 = _split(m, arc)
    k = m.new_arc(m.label[arc])
    m.attach(a1, 1, (key, S))
    m.attach(k, 0, (key, N))
    if side == "right":
        m.attach(k, 1, (key, E))
        m.attach(a2, 0, (key, W))
    else:
        m.attach(k, 1, (key, W))
        m.attach(a2, 0, (key, E))


def _pieces(m: PortMap, dart):
    """Split the arc of a dart; returns (piece at dart start, piece at dart end, forward)."""
    arc, fwd = dart
    first, second = _split(m, arc)
    return (first, second, fwd) if fwd else (second, first, fwd)


def _hang(m: PortMap, arc: int, port, toward_port_is_forward: bool):
    """Attach the loose end of ``arc`` that points toward ``port``."""
    m.attach(arc, 1 if toward_port_is_forward else 0, port)


def _r2_insert(m: PortMap, dart_a, dart_b, a_over: bool):
    # A runs east along the top of the face, B west along the bottom.
    a_w, a_e, fa = _pieces(m, dart_a)
    b_e, b_w, fb = _pieces(m, dart_b)
    par = 0 if a_over else 1  # B sits on slots 0/2 in both crossings
    c1 = m.new_crossing(par)
    c2 = m.new_crossing(par)
    lab_a, lab_b = m.label[dart_a[0]], m.label[dart_b[0]]
    # C1: [B east (int), A NW ext, B west ext, A SE (int)]
    # C2: [B east ext, A NE ext, B west (int), A SW (int)]
    _hang(m, a_w, (c1, 1), fa)
    _hang(m, a_e, (c2, 1), not fa)
    ai = m.new_arc(lab_a)
    m.attach(ai, 0 if fa else 1, (c1, 3))
    m.attach(ai, 1 if fa else 0, (c2, 3))
    _hang(m, b_e, (c2, 0), fb)
    _hang(m, b_w, (c1, 2), not fb)
    bi = m.new_arc(lab_b)
    m.attach(bi, 0 if fb else 1, (c2, 2))
    m.attach(bi, 1 if fb else 0, (c1, 0))


def _twists(m: PortMap, dart_a, dart_b, k: int):
    a_w, a_e, fa = _pieces(m, dart_a)
    b_e, b_w, fb = _pieces(m, dart_b)
    # frame: bottom = west, left = north; forward = west to east
    strands = [(m.label[dart_a[0]], fa), (m.label[dart_b[0]], not fb)]
    bottom, top = twist_region(m, strands, 2 * k)
    for piece, region, fwd, piece_first in ((a_w, bottom[0], fa, True), (b_w, bottom[1], not fb, True),
                                            (a_e, top[0], fa, False), (b_e, top[1], not fb, False)):
        # piece_first: the piece lies west of the region
        if piece_first == fwd:
            m.join(piece, region)
        else:
            m.join(region, piece)


_B_ANGLE = [-math.pi / 3 * j for j in range(6)]


def _triangle(m: PortMap, site: MoveSite):
    darts = site.darts
    keys = [(XPORT, c) for c in site.crossings]
    # arrival slot at node k is where dart k-1 ends
    arr = []
    for k in range(3):
        arc, fwd = darts[k - 1]
        port = m.ends[arc][1 if fwd else 0]
        assert port[0] == keys[k]
        arr.append(port[1])
    # boundary ports in order: at node k, slot i+3 (strand k) then i+2 (strand k-1)
    bports, strand_of = [], []
    for k in range(3):
        i = arr[k]
        bports += [(keys[k], (i + 3) % 4), (keys[k], (i + 2) % 4)]
        strand_of += [k, (k - 1) % 3]
    # strand k joins B_j and B_{j+3}; direction from the external arcs
    ext = []
    for p in bports:
        arc = m.port_arc(p)
        which = 0 if m.ends[arc][0] == p else 1
        ext.append((arc, which))
    over_pair = {}
    for k in range(3):
        node = keys[k]
        i = arr[k]
        # strands at node k: k-1 via (i, i+2), k via (i+1, i+3)
        km1_over = (i % 2) != m.under[node]
        over_pair[frozenset({k, (k - 1) % 3})] = (k - 1) % 3 if km1_over else k
    ends_of = {s: [j for j in range(6) if strand_of[j] == s] for s in range(3)}
    label_of = {s: m.label[ext[ends_of[s][0]][0]] for s in range(3)}
    # strand s flows from B_j to B_j' where the external arc at B_j is incoming to the region
    flow = {}
    for s, (j1, j2) in ends_of.items():
        flow[s] = (j1, j2) if ext[j1][1] == 1 else (j2, j1)
    internal = [m.port_arc((keys[k], (arr[k] + 1) % 4)) for k in range(3)]
    for key in keys:
        m.remove_node(key)
    for a in set(internal):
        m.delete_arc(a)
    # new crossings sit at boundary pairs (1,2), (3,4), (5,0)
    pos = [(math.cos(t), math.sin(t)) for t in _B_ANGLE]
    new_nodes = {}
    for pair in ((1, 2), (3, 4), (5, 0)):
        s1, s2 = strand_of[pair[0]], strand_of[pair[1]]
        new_nodes[frozenset({s1, s2})] = pair
    keymap = {}
    for pairset, (p, q) in new_nodes.items():
        s_over = over_pair[pairset]
        keymap[pairset] = m.new_crossing(0)
    # along each strand from end j to the opposite end: which new crossings, in order
    def order_along(s, j_from):
        j_to = (j_from + 3) % 6
        hits = []
        for pairset, (p, q) in new_nodes.items():
            if s in pairset:
                near = p if strand_of[p] == s else q
                hits.append((0 if near == j_from else 1, pairset))
        hits.sort()
        return [h[1] for h in hits], j_to

    slot_of = {}  # (pairset, strand, toward_end_j) -> slot index
    for pairset in new_nodes:
        rays = []
        for s in pairset:
            j1, j2 = ends_of[s]
            for jt in (j1, j2):
                jo = (jt + 3) % 6
                d = (pos[jt][0] - pos[jo][0], pos[jt][1] - pos[jo][1])
                rays.append((math.atan2(d[1], d[0]), s, jt))
        rays.sort()
        for idx, (_, s, jt) in enumerate(rays):
            slot_of[(pairset, s, jt)] = idx
        key = keymap[pairset]
        s_over = over_pair[pairset]
        under_slot = next(idx for idx, (_, s, jt) in enumerate(rays) if s != s_over)
        m.under[key] = under_slot % 2
    for s in range(3):
        j_in, j_out = flow[s]
        seq, _ = order_along(s, j_in)
        # ports along the strand: B_in -> first node -> second node -> B_out
        path = []
        for pairset in seq:
            key = keymap[pairset]
            path.append(((key, slot_of[(pairset, s, j_in)]), (key, slot_of[(pairset, s, j_out)])))
        arc_in, w_in = ext[j_in]
        m.attach(arc_in, w_in, path[0][0])
        mid = m.new_arc(label_of[s])
        m.attach(mid, 0, path[0][1])
        m.attach(mid, 1, path[1][0])
        arc_out, w_out = ext[j_out]
        m.attach(arc_out, w_out, path[1][1])


# ---------------------------------------------------------------- random sequences

def random_moves(d: Diagram, steps: int, rng: random.Random, kinds=("r1+", "r1-", "r2+", "r2-", "r3"),
                 max_crossings: int | None = None) -> tuple[Diagram, list[MoveSite]]:
    """Apply ``steps`` random moves drawn from ``kinds``; returns the result and the sites used."""
    used = []
    for _ in range(steps):
        options = list(kinds)
        rng.shuffle(options)
        for kind in options:
            if max_crossings is not None and kind in ("r1+", "r2+") and \
                    len(d.crossings) + (1 if kind == "r1+" else 2) > max_crossings:
                continue
            sites = find_sites(d, kind)
            if not sites:
                continue
            site = rng.choice(sites)
            d = apply(d, site)
            used.append(site)
            break
    return d, used
