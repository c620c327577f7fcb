"""Spatial-graph diagrams: crossings plus flat graph vertices.

A :class:`Diagram` is an oriented planar map on the 2-sphere.  Nodes are
crossings (four slots) and flat vertices (any positive number of slots);
slots are listed counterclockwise.  Arcs are oriented and run from the slot
where they are outgoing to the slot where they are incoming.  Every arc
carries the id of the abstract graph edge it belongs to.

Crossings store their arcs as ``(a, b, c, d)`` starting from the incoming
under-arc ``a``; the under-strand leaves through ``c``.  The over-strand
occupies ``b`` and ``d``; ``over_in_b`` says whether ``b`` is its incoming
end.  A crossing is positive when the under-strand runs right-to-left as
seen along the over-strand, which makes ``over_in_b`` crossings negative.

Arcs declared but never placed in a slot are crossing-free circles.

Surgery happens on :class:`PortMap`, a mutable mirror of the diagram in
which arcs are explicit ``(tail_port, head_port)`` pairs and ends may be
temporarily loose (``None``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graphcore import Cycle, MultiGraph

__all__ = [
    "Crossing",
    "FlatVertex",
    "Diagram",
    "DiagramError",
    "PortMap",
    "HandcuffDiagram",
    "P4Diagram",
    "parse",
    "serialize",
    "validate",
    "faces",
    "restrict",
    "contract_edges",
    "smooth_degree2",
    "underlying_graph",
    "components",
    "mirror",
    "reverse",
    "switch",
    "crossing_sign",
    "edge_chain",
]


class DiagramError(ValueError):
    """Syntax or validation failure; ``invariant`` names the violated rule."""

    def __init__(self, message: str, line: int | None = None, invariant: str | None = None):
        self.line = line
        self.invariant = invariant
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Crossing:
    id: int
    arcs: tuple[int, int, int, int]
    over_in_b: bool = True

    @property
    def sign(self) -> int:
        return -1 if self.over_in_b else 1

    @property
    def over_in(self) -> int:
        return self.arcs[1] if self.over_in_b else self.arcs[3]

    @property
    def over_out(self) -> int:
        return self.arcs[3] if self.over_in_b else self.arcs[1]


@dataclass(frozen=True)
class FlatVertex:
    id: str
    slots: tuple[tuple[int, bool], ...]  # (arc, outgoing)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...] = ()
    vertices: tuple[FlatVertex, ...] = ()
    labels: tuple[tuple[int, str], ...] = ()
    roles: tuple[tuple[str, str], ...] = ()

    # -- convenient views -------------------------------------------------
    @property
    def label(self) -> dict[int, str]:
        return dict(self.labels)

    @property
    def role(self) -> dict[str, str]:
        return dict(self.roles)

    @property
    def arcs(self) -> list[int]:
        return [a for a, _ in self.labels]

    def crossing(self, cid: int) -> Crossing:
        for x in self.crossings:
            if x.id == cid:
                return x
        raise KeyError(cid)

    def vertex(self, vid: str) -> FlatVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    @property
    def free_arcs(self) -> list[int]:
        used = {a for x in self.crossings for a in x.arcs}
        used |= {a for v in self.vertices for a, _ in v.slots}
        return [a for a in self.arcs if a not in used]

    @property
    def edges(self) -> list[str]:
        return sorted(set(self.label.values()))

    def with_roles(self, roles: dict[str, str]) -> "Diagram":
        return Diagram(self.crossings, self.vertices, self.labels, tuple(sorted(roles.items())))

    def __str__(self):
        return serialize(self)


def crossing_sign(x: Crossing) -> int:
    return x.sign


# ---------------------------------------------------------------- port map

XPORT = "x"
VPORT = "v"


class PortMap:
    """Mutable working form of a diagram.

    ``slots[node]`` lists arc ids counterclockwise (``None`` for an empty
    slot while rebuilding); ``ends[arc] = [tail, head]`` with ports
    ``(node, slot)``; crossings record in ``under`` which slot parity holds
    the under-strand.
    """

    def __init__(self):
        self.slots: dict[tuple, list] = {}
        self.under: dict[tuple, int] = {}
        self.ends: dict[int, list] = {}
        self.label: dict[int, str] = {}
        self.roles: dict[str, str] = {}
        self.alias: dict[int, int] = {}
        self._next_arc = 1
        self._next_x = 1
        self.origin: dict[tuple, object] = {}

    # -- construction -----------------------------------------------------
    @classmethod
    def from_diagram(cls, d: Diagram) -> "PortMap":
        m = cls()
        m.label = dict(d.labels)
        m.roles = dict(d.roles)
        for a in m.label:
            m.ends[a] = [None, None]
        for x in d.crossings:
            key = (XPORT, x.id)
            m.slots[key] = list(x.arcs)
            m.under[key] = 0
            a, b, c, dd = x.arcs
            m._set(a, 1, (key, 0))
            m._set(c, 0, (key, 2))
            m._set(b, 1 if x.over_in_b else 0, (key, 1))
            m._set(dd, 0 if x.over_in_b else 1, (key, 3))
        for v in d.vertices:
            key = (VPORT, v.id)
            m.slots[key] = [a for a, _ in v.slots]
            for i, (a, out) in enumerate(v.slots):
                m._set(a, 0 if out else 1, (key, i))
        m._next_arc = max(m.label, default=0) + 1
        m._next_x = max((x.id for x in d.crossings), default=0) + 1
        return m

    def _set(self, arc, which, port):
        if arc not in self.ends:
            raise DiagramError(f"arc {arc} has no label", invariant="labels")
        if self.ends[arc][which] is not None:
            raise DiagramError(f"arc {arc} used twice as {'outgoing' if which == 0 else 'incoming'} end",
                               invariant="arc multiplicity")
        self.ends[arc][which] = port

    def new_arc(self, label: str) -> int:
        a = self._next_arc
        self._next_arc += 1
        self.ends[a] = [None, None]
        self.label[a] = label
        return a

    def new_crossing(self, under: int = 0, origin=None) -> tuple:
        key = (XPORT, self._next_x)
        self._next_x += 1
        self.slots[key] = [None] * 4
        self.under[key] = under
        if origin is not None:
            self.origin[key] = origin
        return key

    def attach(self, arc: int, which: int, port: tuple):
        """Place end ``which`` (0 tail, 1 head) of ``arc`` at ``port``."""
        node, i = port
        self.ends[arc][which] = port
        self.slots[node][i] = arc

    def detach(self, arc: int, which: int):
        port = self.ends[arc][which]
        if port is not None:
            node, i = port
            if node in self.slots and self.slots[node][i] == arc:
                self.slots[node][i] = None
        self.ends[arc][which] = None

    def find(self, arc: int) -> int:
        while arc in self.alias:
            arc = self.alias[arc]
        return arc

    def port_arc(self, port: tuple) -> int:
        node, i = port
        return self.slots[node][i]

    def is_out(self, port: tuple) -> bool:
        arc = self.port_arc(port)
        return self.ends[arc][0] == port

    def join(self, a: int, b: int) -> int:
        """Merge ``a`` (loose head) with ``b`` (loose tail); keep the smaller id."""
        a, b = self.find(a), self.find(b)
        if self.ends[a][1] is not None or self.ends[b][0] is not None:
            raise DiagramError("join needs a loose head and a loose tail")
        if a == b:
            return a  # closed up into a crossing-free circle
        keep, drop = min(a, b), max(a, b)
        tail, head = self.ends[a][0], self.ends[b][1]
        lab = self.label[a]
        for arc in (a, b):
            del self.ends[arc]
            del self.label[arc]
        self.ends[keep] = [None, None]
        self.label[keep] = lab
        if tail is not None:
            self.attach(keep, 0, tail)
        if head is not None:
            self.attach(keep, 1, head)
        self.alias[drop] = keep
        return keep

    def delete_arc(self, arc: int):
        self.detach(arc, 0)
        self.detach(arc, 1)
        del self.ends[arc]
        del self.label[arc]

    def remove_node(self, node: tuple):
        for i, arc in enumerate(self.slots[node]):
            if arc is not None and arc in self.ends:
                for w in (0, 1):
                    if self.ends[arc][w] == (node, i):
                        self.ends[arc][w] = None
        del self.slots[node]
        self.under.pop(node, None)

    def rebuild_vertex(self, node: tuple, entries: list[tuple[int, int]]):
        """Replace the slot list of a flat vertex by ``(arc, which_end)`` entries."""
        for i, arc in enumerate(self.slots.get(node, [])):
            if arc is not None and arc in self.ends:
                for w in (0, 1):
                    if self.ends[arc][w] == (node, i):
                        self.ends[arc][w] = None
        self.slots[node] = [None] * len(entries)
        for i, (arc, which) in enumerate(entries):
            self.attach(arc, which, (node, i))

    def strand_exit(self, port: tuple) -> tuple:
        node, i = port
        return (node, (i + 2) % 4)

    # -- finishing ------------------------------------------------------------
    def to_diagram(self) -> Diagram:
        crossings = []
        for key, arcs in self.slots.items():
            if key[0] != XPORT:
                continue
            if any(a is None for a in arcs):
                raise DiagramError(f"crossing {key[1]} has an empty slot")
            p = self.under[key]
            heads = [s for s in (p, p + 2) if self.ends[arcs[s]][1] == (key, s)]
            tails = [s for s in (p, p + 2) if self.ends[arcs[s]][0] == (key, s)]
            if len(heads) != 1 or len(tails) != 1:
                raise DiagramError(f"crossing {key[1]}: under-strand not coherently oriented",
                                   invariant="orientation")
            r = heads[0]
            rot = tuple(arcs[(r + j) % 4] for j in range(4))
            b_in = self.ends[rot[1]][1] == (key, (r + 1) % 4)
            d_in = self.ends[rot[3]][1] == (key, (r + 3) % 4)
            if b_in == d_in:
                raise DiagramError(f"crossing {key[1]}: over-strand not coherently oriented",
                                   invariant="orientation")
            crossings.append(Crossing(key[1], rot, b_in))
        vertices = []
        for key, arcs in self.slots.items():
            if key[0] != VPORT:
                continue
            if any(a is None for a in arcs):
                raise DiagramError(f"vertex {key[1]} has an empty slot")
            vertices.append(FlatVertex(key[1], tuple(
                (a, self.ends[a][0] == (key, i)) for i, a in enumerate(arcs))))
        for a, (t, h) in self.ends.items():
            if (t is None) != (h is None):
                raise DiagramError(f"arc {a} has a loose end")
        crossings.sort(key=lambda x: x.id)
        vertices.sort(key=lambda v: _vkey(v.id))
        edges = set(self.label.values())
        roles = tuple(sorted((r, e) for r, e in self.roles.items() if e in edges))
        return Diagram(tuple(crossings), tuple(vertices), tuple(sorted(self.label.items())), roles)


def _vkey(v: str):
    return (0, int(v), "") if v.isdigit() else (1, 0, v)


# ---------------------------------------------------------------- text format

_ARC = re.compile(r"^([+-]?)(\d+)$")


def parse(text: str) -> Diagram:
    """Read the ``sgd 1`` format; raises :class:`DiagramError` with a line number."""
    header = False
    declared: list[int] = []
    crossings: list[Crossing] = []
    vertices: list[FlatVertex] = []
    labels: dict[int, str] = {}
    roles: dict[str, str] = {}
    seen_ids: set = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if not header:
            if tok != ["sgd", "1"]:
                raise DiagramError("expected header 'sgd 1'", lineno)
            header = True
            continue
        try:
            if kind == "arc":
                for t in tok[1:]:
                    declared.append(int(t))
            elif kind == "x":
                if len(tok) != 6:
                    raise DiagramError("crossing needs an id and four arcs", lineno)
                cid = int(tok[1])
                if ("x", cid) in seen_ids:
                    raise DiagramError(f"duplicate crossing id {cid}", lineno)
                seen_ids.add(("x", cid))
                a, b, c, d = (_ARC.match(t) for t in tok[2:])
                if not all((a, b, c, d)) or a.group(1) or c.group(1):
                    raise DiagramError("bad arc token in crossing", lineno)
                flags = (b.group(1), d.group(1))
                if flags in (("", ""), ("-", "+")):
                    b_in = True
                elif flags == ("+", "-"):
                    b_in = False
                else:
                    raise DiagramError("over-strand flags must be '-b +d' or '+b -d'", lineno)
                crossings.append(Crossing(cid, (int(a.group(2)), int(b.group(2)),
                                                int(c.group(2)), int(d.group(2))), b_in))
            elif kind == "v":
                if len(tok) < 2:
                    raise DiagramError("vertex needs an id", lineno)
                vid = tok[1]
                if ("v", vid) in seen_ids:
                    raise DiagramError(f"duplicate vertex id {vid}", lineno)
                seen_ids.add(("v", vid))
                slots = []
                for t in tok[2:]:
                    mt = _ARC.match(t)
                    if not mt or not mt.group(1):
                        raise DiagramError(f"vertex slot {t!r} needs a +/- flag", lineno)
                    slots.append((int(mt.group(2)), mt.group(1) == "+"))
                vertices.append(FlatVertex(vid, tuple(slots)))
            elif kind == "label":
                if len(tok) != 3:
                    raise DiagramError("label needs an arc and an edge id", lineno)
                labels[int(tok[1])] = tok[2]
            elif kind == "role":
                if len(tok) != 3:
                    raise DiagramError("role needs a name and an edge id", lineno)
                roles[tok[1]] = tok[2]
            else:
                raise DiagramError(f"unknown record {kind!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, DiagramError):
                raise
            raise DiagramError(str(exc), lineno) from None
    if not header:
        raise DiagramError("empty input; expected header 'sgd 1'", 1)
    used = [a for x in crossings for a in x.arcs] + [a for v in vertices for a, _ in v.slots]
    counts: dict[int, int] = {}
    for a in used:
        counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, n in counts.items() if n != 2)
    if bad:
        raise DiagramError(f"arc multiplicity: arcs {bad} do not occur exactly twice",
                           invariant="arc multiplicity")
    all_arcs = sorted(set(used) | set(declared) | set(labels))
    unlabeled = [a for a in all_arcs if a not in labels]
    d = Diagram(tuple(sorted(crossings, key=lambda x: x.id)), tuple(vertices),
                tuple(sorted({a: labels.get(a, "?") for a in all_arcs}.items())),
                tuple(sorted(roles.items())))
    if unlabeled:
        d = _autolabel(d, set(unlabeled))
    report = validate(d)
    if report:
        raise DiagramError("; ".join(report), invariant=report[0].split(":")[0])
    return d


def serialize(d: Diagram) -> str:
    lines = ["sgd 1"]
    placed = {a for x in d.crossings for a in x.arcs} | {a for v in d.vertices for a, _ in v.slots}
    free = [a for a in d.arcs if a not in placed]
    if free:
        lines.append("arc " + " ".join(map(str, free)))
    for x in d.crossings:
        a, b, c, dd = x.arcs
        if x.over_in_b:
            lines.append(f"x {x.id} {a} {b} {c} {dd}")
        else:
            lines.append(f"x {x.id} {a} +{b} {c} -{dd}")
    for v in d.vertices:
        lines.append(f"v {v.id} " + " ".join(("+" if o else "-") + str(a) for a, o in v.slots))
    for a, e in d.labels:
        lines.append(f"label {a} {e}")
    for r, e in d.roles:
        lines.append(f"role {r} {e}")
    return "\n".join(lines) + "\n"


def _autolabel(d: Diagram, unlabeled: set[int]) -> Diagram:
    """Give every unlabeled strand chain a fresh edge id ``k1, k2, ...``."""
    lab = d.label
    taken = set(lab.values())
    n = 0
    for chain in _chains(d):
        if any(a in unlabeled for a in chain):
            named = {lab[a] for a in chain if a not in unlabeled}
            if len(named) == 1:
                name = named.pop()
            else:
                n += 1
                while f"k{n}" in taken:
                    n += 1
                name = f"k{n}"
                taken.add(name)
            for a in chain:
                lab[a] = name
    return Diagram(d.crossings, d.vertices, tuple(sorted(lab.items())), d.roles)


# ---------------------------------------------------------------- structure

def _arc_ends(d: Diagram) -> dict[int, list]:
    ends: dict[int, list] = {a: [None, None] for a in d.arcs}
    for x in d.crossings:
        a, b, c, dd = x.arcs
        ends.setdefault(a, [None, None])[1] = (XPORT, x.id, 0)
        ends.setdefault(c, [None, None])[0] = (XPORT, x.id, 2)
        ends.setdefault(b, [None, None])[1 if x.over_in_b else 0] = (XPORT, x.id, 1)
        ends.setdefault(dd, [None, None])[0 if x.over_in_b else 1] = (XPORT, x.id, 3)
    for v in d.vertices:
        for i, (a, out) in enumerate(v.slots):
            ends.setdefault(a, [None, None])[0 if out else 1] = (VPORT, v.id, i)
    return ends


def _chains(d: Diagram) -> list[list[int]]:
    """Strand chains: maximal arc sequences continuing straight through crossings.

    Open chains run from a vertex to a vertex; closed chains pass through
    crossings only (or are crossing-free circles).
    """
    ends = _arc_ends(d)
    xs = {x.id: x for x in d.crossings}
    nxt: dict[int, int] = {}
    for a, (t, h) in ends.items():
        if h is not None and h[0] == XPORT:
            x = xs[h[1]]
            nxt[a] = x.arcs[(h[2] + 2) % 4]
    starts = [a for a, (t, h) in ends.items() if t is not None and t[0] == VPORT]
    seen: set[int] = set()
    out = []
    for s in sorted(starts):
        chain = [s]
        seen.add(s)
        while chain[-1] in nxt:
            chain.append(nxt[chain[-1]])
            seen.add(chain[-1])
        out.append(chain)
    for a in sorted(ends):
        if a in seen:
            continue
        chain = [a]
        seen.add(a)
        b = nxt.get(a)
        while b is not None and b != a:
            chain.append(b)
            seen.add(b)
            b = nxt.get(b)
        out.append(chain)
    return out


def edge_chain(d: Diagram, edge: str) -> list[int]:
    for ch in _chains(d):
        if d.label[ch[0]] == edge:
            return ch
    raise KeyError(edge)


def faces(d: Diagram) -> list[list[tuple[int, bool]]]:
    """Trace faces; each is a list of darts ``(arc, forward)``, face on the right."""
    ends = _arc_ends(d)
    slots: dict[tuple, list[int]] = {}
    for x in d.crossings:
        slots[(XPORT, x.id)] = list(x.arcs)
    for v in d.vertices:
        slots[(VPORT, v.id)] = [a for a, _ in v.slots]
    darts = [(a, f) for a in d.arcs if ends[a][0] is not None for f in (True, False)]
    seen: set = set()
    out = []
    for dart in darts:
        if dart in seen:
            continue
        face = []
        cur = dart
        while cur not in seen:
            seen.add(cur)
            face.append(cur)
            arc, fwd = cur
            node_kind, node_id, i = ends[arc][1 if fwd else 0]
            ring = slots[(node_kind, node_id)]
            j = (i + 1) % len(ring)
            nxt_arc = ring[j]
            nxt_fwd = ends[nxt_arc][0] == (node_kind, node_id, j)
            cur = (nxt_arc, nxt_fwd)
        out.append(face)
    return out


def _node_components(d: Diagram) -> int:
    ends = _arc_ends(d)
    parent: dict = {}

    def root(k):
        while parent.setdefault(k, k) != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for x in d.crossings:
        root((XPORT, x.id))
    for v in d.vertices:
        root((VPORT, v.id))
    for a, (t, h) in ends.items():
        if t is not None and h is not None:
            parent[root(t[:2])] = root(h[:2])
    return len({root(k) for k in parent})


def validate(d: Diagram) -> list[str]:
    """Return a list of violated invariants (empty means valid)."""
    problems = []
    labels = d.label
    counts: dict[int, list[int]] = {}
    for x in d.crossings:
        a, b, c, dd = x.arcs
        for arc, out in ((a, 0), (c, 1), (b, 0 if x.over_in_b else 1), (dd, 1 if x.over_in_b else 0)):
            counts.setdefault(arc, [0, 0])[out] += 1
    for v in d.vertices:
        if not v.slots:
            problems.append(f"vertex degree: flat vertex {v.id} has degree 0")
        for arc, out in v.slots:
            counts.setdefault(arc, [0, 0])[1 if out else 0] += 1
    for arc, (nin, nout) in counts.items():
        if (nin, nout) != (1, 1):
            problems.append(f"arc multiplicity: arc {arc} has {nin} incoming and {nout} outgoing ends")
        if arc not in labels:
            problems.append(f"labels: arc {arc} unlabeled")
    if problems:
        return problems
    for x in d.crossings:
        a, b, c, dd = x.arcs
        if labels[a] != labels[c] or labels[b] != labels[dd]:
            problems.append(f"orientation: crossing {x.id} changes edge label mid-strand")
    seen_edges: dict[str, int] = {}
    for ch in _chains(d):
        names = {labels[a] for a in ch}
        if len(names) != 1:
            problems.append(f"labels: chain starting at arc {ch[0]} mixes edges {sorted(names)}")
            continue
        name = names.pop()
        seen_edges[name] = seen_edges.get(name, 0) + 1
    for name, n in seen_edges.items():
        if n > 1:
            problems.append(f"labels: edge {name} is split into {n} chains")
    edges = set(labels.values())
    for r, e in d.roles:
        if e not in edges:
            problems.append(f"roles: role {r} names unknown edge {e}")
    if problems:
        return problems
    v_count = len(d.crossings) + len(d.vertices)
    placed = {a for x in d.crossings for a in x.arcs} | {a for v in d.vertices for a, _ in v.slots}
    e_count = len(placed)
    f_count = len(faces(d))
    comps = _node_components(d)
    if v_count - e_count + f_count != 2 * comps:
        problems.append(f"euler: V - E + F = {v_count} - {e_count} + {f_count} != 2 x {comps} components")
    return problems


def underlying_graph(d: Diagram, name: str = "G") -> MultiGraph:
    """Abstract graph of the diagram; a closed strand becomes a loop on vertex ``~edge``."""
    ends = _arc_ends(d)
    vs = [v.id for v in d.vertices]
    es = []
    for ch in _chains(d):
        e = d.label[ch[0]]
        t, h = ends[ch[0]][0], ends[ch[-1]][1]
        if t is not None and t[0] == VPORT:
            es.append((e, t[1], h[1]))
        else:
            vs.append("~" + e)
            es.append((e, "~" + e, "~" + e))
    es.sort(key=lambda x: x[0])
    return MultiGraph.from_edges(es, vertices=vs, name=name)


def components(d: Diagram) -> list[list[int]]:
    """Closed strand chains of a link diagram (no flat vertices)."""
    if d.vertices:
        raise DiagramError("components() needs a diagram without flat vertices")
    return _chains(d)


# ---------------------------------------------------------------- local edits

def mirror(d: Diagram) -> Diagram:
    m = PortMap.from_diagram(d)
    for k in m.under:
        m.under[k] ^= 1
    return m.to_diagram()


def switch(d: Diagram, cid: int) -> Diagram:
    """Crossing change at ``cid``."""
    m = PortMap.from_diagram(d)
    m.under[(XPORT, cid)] ^= 1
    return m.to_diagram()


def smooth_crossing(d: Diagram, cid: int) -> Diagram:
    """Oriented smoothing at ``cid``; link components are relabeled c1, c2, ..."""
    x = d.crossing(cid)
    m = PortMap.from_diagram(d)
    a, _, c, _ = x.arcs
    o_in, o_out = x.over_in, x.over_out
    m.remove_node((XPORT, cid))
    m.join(a, o_out)
    m.join(o_in, c)
    out = m.to_diagram()
    if out.vertices:
        return out
    labels = {}
    for i, chain in enumerate(components(out), 1):
        for arc in chain:
            labels[arc] = f"c{i}"
    return Diagram(out.crossings, out.vertices, tuple(sorted(labels.items())), ())


def reverse(d: Diagram, edges: str | Iterable[str]) -> Diagram:
    """Reverse the orientation of one or more edges (or link components)."""
    es = {edges} if isinstance(edges, str) else set(edges)
    m = PortMap.from_diagram(d)
    for a, lab in m.label.items():
        if lab in es:
            m.ends[a].reverse()
    return m.to_diagram()


def restrict(d: Diagram, sub: MultiGraph | Iterable[str]) -> Diagram:
    """Diagram of the subgraph spanned by the given edges."""
    keep = set(e for e, _, _ in sub.edges) if isinstance(sub, MultiGraph) else set(sub)
    unknown = keep - set(d.label.values())
    if unknown:
        raise DiagramError(f"not a subgraph: unknown edges {sorted(unknown)}")
    m = PortMap.from_diagram(d)
    for a in [a for a, e in m.label.items() if e not in keep]:
        m.delete_arc(a)
    for key in [k for k in m.slots if k[0] == XPORT]:
        arcs = m.slots[key]
        alive = [s for s in range(4) if arcs[s] is not None]
        if not alive:
            del m.slots[key]
            del m.under[key]
            continue
        if len(alive) == 4:
            continue
        s = alive[0]
        a1, a2 = arcs[s], arcs[(s + 2) % 4]
        inc, out = (a1, a2) if m.ends[a1][1] == (key, s) else (a2, a1)
        m.remove_node(key)
        m.join(inc, out)
    for key in [k for k in m.slots if k[0] == VPORT]:
        entries = [(a, 0 if m.ends[a][0] == (key, i) else 1)
                   for i, a in enumerate(m.slots[key]) if a is not None]
        if entries:
            m.rebuild_vertex(key, entries)
        else:
            del m.slots[key]
    return m.to_diagram()


def _chain_passes(m: PortMap, first_arc: int):
    """Arcs of a strand from ``first_arc`` and the crossing entry ports between them."""
    arcs = [first_arc]
    passes = []
    while True:
        head = m.ends[arcs[-1]][1]
        if head is None or head[0][0] != XPORT:
            return arcs, passes
        passes.append(head)
        arcs.append(m.port_arc(m.strand_exit(head)))


def parallel_replace(m: PortMap, first_arc: int, strands: Sequence[tuple[str, bool]],
                     origin_tag=None):
    """Replace the strand starting at ``first_arc`` by ``k`` blackboard parallels.

    ``strands`` lists ``(label, forward)`` from left to right as seen along
    the strand's direction.  Every crossing the strand passes is replaced by
    ``k`` crossings (``k*k`` for self-crossings) with the same over/under
    data.  The start and end of the strand become loose; returns
    ``(start_arcs, end_arcs)`` whose loose ends sit at the old strand start
    and end respectively.  The old start/end ports are left empty.
    """
    k = len(strands)
    arcs, passes = _chain_passes(m, first_arc)
    n = len(arcs)
    start_port = m.ends[arcs[0]][0]
    end_port = m.ends[arcs[-1]][1]
    by_node: dict[tuple, list[int]] = {}
    for j, (node, _) in enumerate(passes):
        by_node.setdefault(node, []).append(j)
    entry: dict[int, list] = {}
    exit_: dict[int, list] = {}
    remap: dict[tuple, tuple] = {}

    def internal(p_from, p_to, label, fwd):
        a = m.new_arc(label)
        if fwd:
            m.attach(a, 0, p_from)
            m.attach(a, 1, p_to)
        else:
            m.attach(a, 0, p_to)
            m.attach(a, 1, p_from)

    S, E, N, W = 0, 1, 2, 3
    pending_other: list = []
    for node, js in by_node.items():
        old = list(m.slots[node])
        i = passes[js[0]][1]
        e_under = (i % 2) == m.under[node]
        vpar = 0 if e_under else 1
        tag = origin_tag(node) if origin_tag else node
        if len(js) == 1:
            j = js[0]
            ys = [m.new_crossing(vpar, tag) for _ in range(k)]
            entry[j] = [(y, S) for y in ys]
            exit_[j] = [(y, N) for y in ys]
            right, left = (node, (i + 1) % 4), (node, (i + 3) % 4)
            sig = old[(i + 1) % 4]
            west = m.ends[sig][1] == right
            slab = m.label[sig]
            for t in range(k - 1):
                internal((ys[t + 1], W), (ys[t], E), slab, True) if west else \
                    internal((ys[t], E), (ys[t + 1], W), slab, True)
            remap[right] = (ys[-1], E)
            remap[left] = (ys[0], W)
        else:
            jp, jq = js
            grid = [[m.new_crossing(vpar, tag) for _ in range(k)] for _ in range(k)]
            entry[jp] = [(grid[t][0], S) for t in range(k)]
            exit_[jp] = [(grid[t][k - 1], N) for t in range(k)]
            for t in range(k):
                for y in range(k - 1):
                    internal((grid[t][y], N), (grid[t][y + 1], S), strands[t][0], strands[t][1])
            q_entry = passes[jq][1]
            westward = q_entry == (i + 1) % 4
            entry[jq], exit_[jq] = [], []
            for q in range(k):
                row = q if westward else k - 1 - q
                if westward:
                    entry[jq].append((grid[k - 1][row], E))
                    exit_[jq].append((grid[0][row], W))
                    for t in range(k - 1):
                        internal((grid[t + 1][row], W), (grid[t][row], E), strands[q][0], strands[q][1])
                else:
                    entry[jq].append((grid[0][row], W))
                    exit_[jq].append((grid[k - 1][row], E))
                    for t in range(k - 1):
                        internal((grid[t][row], E), (grid[t + 1][row], W), strands[q][0], strands[q][1])
        pending_other.append((node, old))

    # re-hang the other strands on the new crossings
    moved = []
    for node, old in pending_other:
        for s, arc in enumerate(old):
            if (node, s) in remap:
                which = 0 if m.ends[arc][0] == (node, s) else 1
                moved.append((arc, which, remap[(node, s)]))
    for a in arcs:
        if a in m.ends:
            m.delete_arc(a)
    for node, _ in pending_other:
        for s in range(4):
            if (node, s) in remap:
                arc = m.slots[node][s]
                if arc is not None:
                    which = 0 if m.ends[arc][0] == (node, s) else 1
                    m.ends[arc][which] = None
        del m.slots[node]
        m.under.pop(node, None)
    for arc, which, port in moved:
        m.attach(arc, which, port)
    if start_port is not None and start_port[0] in m.slots:
        m.slots[start_port[0]][start_port[1]] = None
    if end_port is not None and end_port[0] in m.slots:
        m.slots[end_port[0]][end_port[1]] = None

    start_arcs, end_arcs = [], []
    for j in range(n):
        for t, (lab, fwd) in enumerate(strands):
            a = m.new_arc(lab)
            p_from = exit_[j - 1][t] if j > 0 else None
            p_to = entry[j][t] if j < n - 1 else None
            if fwd:
                if p_from:
                    m.attach(a, 0, p_from)
                if p_to:
                    m.attach(a, 1, p_to)
            else:
                if p_from:
                    m.attach(a, 1, p_from)
                if p_to:
                    m.attach(a, 0, p_to)
            if j == 0:
                start_arcs.append(a)
            if j == n - 1:
                end_arcs.append(a)
    return start_arcs, end_arcs


def twist_region(m: PortMap, strands: Sequence[tuple[str, bool]], half_twists: int):
    """Two parallel strands (left, right) making ``|half_twists|`` crossings.

    ``strands`` gives ``(label, forward)`` for the left and right strand,
    where forward means the strand runs from the bottom of the region to the
    top.  Crossing signs are all ``sign(half_twists)``.  Returns
    ``(bottom, top)``: two lists of new arcs ``[left, right]`` with loose
    ends at the bottom and top.  After an odd count the strands swap sides,
    so ``top[0]`` carries the original right strand.
    """
    want = 1 if half_twists >= 0 else -1
    pos = list(strands)  # pos[0] is the strand currently on the left
    bottom = []
    for lab, fwd in pos:
        a = m.new_arc(lab)
        bottom.append(a)
    current = list(bottom)  # arcs whose top end is still open

    def hang(arc, fwd, port, at_top_of_arc):
        # at_top_of_arc: the port is at the upper end of this arc segment
        if fwd == at_top_of_arc:
            m.attach(arc, 1, port)
        else:
            m.attach(arc, 0, port)

    for _ in range(abs(half_twists)):
        (ll, lf), (rl, rf) = pos
        ol, or_ = (1 if lf else -1), (1 if rf else -1)
        left_over = ol * or_ == want
        # slots ccw: SW, SE, NE, NW; left strand SW->NE (0,2), right SE->NW (1,3)
        node = m.new_crossing(1 if left_over else 0)
        hang(current[0], lf, (node, 0), True)
        hang(current[1], rf, (node, 1), True)
        up_left = m.new_arc(rl)   # leaves NW, carries the right strand
        up_right = m.new_arc(ll)  # leaves NE, carries the left strand
        hang(up_right, lf, (node, 2), False)
        hang(up_left, rf, (node, 3), False)
        current = [up_left, up_right]
        pos = [pos[1], pos[0]]
    if not half_twists:
        return bottom, bottom
    return bottom, current


def contract_edges(d: Diagram, edges: Iterable[str]) -> Diagram:
    """Contract non-loop edges by sliding the tail vertex along each edge.

    The tail vertex's other edges follow the contracted edge as blackboard
    parallels and are spliced into the head vertex at the edge's slot.
    """
    for e in edges:
        d = _contract_one(d, e)
    return d


def _contract_one(d: Diagram, e: str) -> Diagram:
    g = underlying_graph(d)
    u, v = g.edge(e)
    if u == v:
        raise DiagramError(f"cannot contract loop {e}")
    if g.degree(u) == 1:
        return restrict(d, [x for x in d.edges if x != e])
    m = PortMap.from_diagram(d)
    ukey, vkey = (VPORT, u), (VPORT, v)
    uarcs = m.slots[ukey]
    n = len(uarcs)
    es = next(i for i, a in enumerate(uarcs) if m.label[a] == e and m.ends[a][0] == (ukey, i))
    first = uarcs[es]
    # the other slots at u, counterclockwise after e: left to right along e
    strands = []
    for j in range(1, n):
        port = (ukey, (es + j) % n)
        arc = m.port_arc(port)
        strands.append((m.label[arc], m.ends[arc][1] == port, arc))
    last = _chain_passes(m, first)[0][-1]
    v_slot = m.ends[last][1][1]
    v_before = [(a, 0 if m.ends[a][0] == (vkey, i) else 1) for i, a in enumerate(m.slots[vkey])]
    for _, inc, arc in strands:
        m.ends[arc][1 if inc else 0] = None
    starts, ends = parallel_replace(m, first, [(lab, inc) for lab, inc, _ in strands])
    del m.slots[ukey]
    for (_, inc, arc), s in zip(strands, starts):
        if inc:
            m.join(m.find(arc), s)
        else:
            m.join(s, m.find(arc))
    entries = []
    for i, (a, which) in enumerate(v_before):
        if i == v_slot:
            entries += [(m.find(t), 1 if inc else 0) for (_, inc, _), t in zip(strands, ends)]
        else:
            entries.append((m.find(a), which))
    m.rebuild_vertex(vkey, entries)
    return m.to_diagram()


def smooth_degree2(d: Diagram, keep: Iterable[str] = ()) -> tuple[Diagram, dict[str, tuple[tuple[str, bool], ...]]]:
    """Suppress every degree-2 flat vertex not listed in ``keep``.

    The two edges through the vertex merge (the second is reversed first if
    needed); the merged edge keeps the smaller id.  A vertex sitting on a
    closed loop turns the loop into a vertex-free circle.  Returns the new
    diagram and a map from surviving edge ids to the original edges they
    absorbed, in order along the merged edge, each with a flag telling
    whether it is traversed in its original direction.
    """
    keep = set(keep)
    history = {e: ((e, True),) for e in d.label.values()}
    while True:
        cand = [v for v in d.vertices if len(v.slots) == 2 and v.id not in keep]
        if not cand:
            return d, history
        v = cand[0]
        (a1, o1), (a2, o2) = v.slots
        lab = d.label
        e1, e2 = lab[a1], lab[a2]
        if e1 != e2 and o1 == o2:
            d = reverse(d, e2)
            history[e2] = tuple((e, not f) for e, f in reversed(history[e2]))
            v = d.vertex(v.id)
            (a1, o1), (a2, o2) = v.slots
        inc, out = (a1, a2) if not o1 else (a2, a1)
        m = PortMap.from_diagram(d)
        key = (VPORT, v.id)
        e_in, e_out = lab[inc], lab[out]
        merged = min(e_in, e_out) if e_in != e_out else e_in
        m.remove_node(key)
        for a, name in list(m.label.items()):
            if name in (e_in, e_out):
                m.label[a] = merged
        m.join(inc, out)
        if e_in != e_out:
            history[merged] = history.pop(e_in) + history.pop(e_out)
            for r, e in list(m.roles.items()):
                if e in (e_in, e_out):
                    m.roles[r] = merged
        d = m.to_diagram()


# ---------------------------------------------------------------- role views

@dataclass(frozen=True)
class HandcuffDiagram:
    """Diagram of the handcuff graph: loops ``loop1``, ``loop2`` joined by ``edge``."""

    diagram: Diagram
    loop1: str
    loop2: str
    edge: str

    @classmethod
    def from_diagram(cls, d: Diagram) -> "HandcuffDiagram":
        r = d.role
        missing = {"loop1", "loop2", "edge"} - set(r)
        if missing:
            raise DiagramError(f"handcuff roles missing: {sorted(missing)}")
        h = cls(d, r["loop1"], r["loop2"], r["edge"])
        h.check()
        return h

    def check(self):
        g = underlying_graph(self.diagram)
        em = g.edge_map
        if set(em) != {self.loop1, self.loop2, self.edge} or len(g.vertices) != 2:
            raise DiagramError("underlying graph is not the handcuff graph", invariant="handcuff")
        (a, b), (c, dd), (p, q) = em[self.loop1], em[self.loop2], em[self.edge]
        if a != b or c != dd or a == c or {p, q} != {a, c}:
            raise DiagramError("underlying graph is not the handcuff graph", invariant="handcuff")

    @property
    def link_edges(self) -> tuple[str, str]:
        return self.loop1, self.loop2


P4_EDGES = ("e1", "e2", "e3", "e4", "e5", "e6")


@dataclass(frozen=True)
class P4Diagram:
    """Diagram of P4: loops e5 at ``u`` and e6 at ``x``; e1, e2 join u-w; e3, e4 join w-x.

    ``edges`` maps the role names ``e1`` .. ``e6`` to edge ids of ``diagram``.
    Cycles: c1 = e5, c2 = e1 u e2, c3 = e3 u e4, c4 = e6.
    """

    diagram: Diagram
    edges: tuple[tuple[str, str], ...]

    @classmethod
    def from_diagram(cls, d: Diagram) -> "P4Diagram":
        r = d.role
        missing = [e for e in P4_EDGES if e not in r]
        if missing:
            raise DiagramError(f"P4 roles missing: {missing}")
        p = cls(d, tuple((e, r[e]) for e in P4_EDGES))
        p.check()
        return p

    @property
    def role(self) -> dict[str, str]:
        return dict(self.edges)

    def check(self):
        g = underlying_graph(self.diagram)
        em = g.edge_map
        r = self.role
        if set(em) != set(r.values()):
            raise DiagramError("underlying graph is not P4", invariant="p4")
        u = em[r["e5"]][0]
        x = em[r["e6"]][0]
        ok = em[r["e5"]][1] == u and em[r["e6"]][1] == x and u != x
        ws = set()
        for e, ends in (("e1", u), ("e2", u), ("e3", x), ("e4", x)):
            a, b = em[r[e]]
            if ends not in (a, b):
                ok = False
            ws.add(b if a == ends else a)
        if not ok or len(ws) != 1 or ws & {u, x}:
            raise DiagramError("underlying graph is not P4", invariant="p4")

    def cycle(self, c: int) -> Cycle:
        """Oriented cycle c1..c4; c2, c3 follow the direction of e1, e3."""
        g = underlying_graph(self.diagram)
        r = self.role
        if c in (1, 4):
            e = r["e5" if c == 1 else "e6"]
            return Cycle((e,), (g.edge(e)[0],))
        first, second = (r["e1"], r["e2"]) if c == 2 else (r["e3"], r["e4"])
        a, b = g.edge(first)
        return Cycle((first, second), (a, b))

    def handcuff_edges(self, i: int, j: int) -> list[str]:
        r = self.role
        return [r["e5"], r[f"e{i}"], r[f"e{j}"], r["e6"]]
