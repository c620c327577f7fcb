"""Abstract multigraph combinatorics.

Graphs here are small (a dozen or so vertices), so everything favours
clarity over asymptotics: cycles are enumerated by backtracking, the
Petersen family is computed as a closure under triangle/star exchanges and
minors are found by a bounded contraction/deletion search.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms import isomorphism as nxiso

__all__ = [
    "MultiGraph",
    "Cycle",
    "GraphFormatError",
    "MinorBudgetExceeded",
    "MinorResult",
    "LinkCertificate",
    "cycles",
    "disjoint_cycle_pairs",
    "nabla_y",
    "y_nabla",
    "simplify",
    "is_isomorphic",
    "petersen_family",
    "petersen_graph",
    "complete_graph",
    "star_connect",
    "has_minor",
    "is_intrinsically_linked_cert",
    "parse_graph",
    "serialize_graph",
]

DEFAULT_MINOR_BUDGET = 10**7
MAX_MINOR_VERTICES = 15


class GraphFormatError(ValueError):
    """Raised for malformed graph text or ill-formed graph data."""


class MinorBudgetExceeded(RuntimeError):
    """The minor search hit its node budget or the size bound."""


@dataclass(frozen=True)
class MultiGraph:
    """Finite graph with loops and multi-edges.

    ``edges`` holds ``(edge_id, u, v)`` triples; ``u == v`` is a loop.
    ``bridges`` names edges added by :func:`star_connect`.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    name: str = "G"
    bridges: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphFormatError("duplicate vertex id")
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphFormatError("duplicate edge id")
        for eid, u, v in self.edges:
            if u not in vs or v not in vs:
                raise GraphFormatError(f"edge {eid} references unknown vertex")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], vertices: Iterable = (), name="G", bridges=()):
        edges = [(str(e), str(u), str(v)) for e, u, v in edges]
        vs = list(dict.fromkeys([str(v) for v in vertices]))
        for _, u, v in edges:
            for w in (u, v):
                if w not in vs:
                    vs.append(w)
        return cls(tuple(vs), tuple(edges), name, tuple(bridges))

    def edge(self, eid: str) -> tuple[str, str]:
        for e, u, v in self.edges:
            if e == eid:
                return u, v
        raise KeyError(eid)

    @property
    def edge_map(self) -> dict[str, tuple[str, str]]:
        return {e: (u, v) for e, u, v in self.edges}

    def degree(self, v: str) -> int:
        return sum((u == v) + (w == v) for _, u, w in self.edges)

    def incident(self, v: str) -> list[str]:
        return [e for e, a, b in self.edges if v in (a, b)]

    def neighbors(self, v: str) -> list[str]:
        out = []
        for _, a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def subgraph(self, edge_ids: Iterable[str]) -> "MultiGraph":
        keep = set(edge_ids)
        em = self.edge_map
        missing = keep - set(em)
        if missing:
            raise GraphFormatError(f"unknown edges {sorted(missing)}")
        es = [e for e in self.edges if e[0] in keep]
        vs = [v for v in self.vertices if any(v in (a, b) for _, a, b in es)]
        return MultiGraph(tuple(vs), tuple(es), self.name,
                          tuple(b for b in self.bridges if b in keep))

    def delete_edges(self, edge_ids: Iterable[str]) -> "MultiGraph":
        drop = set(edge_ids)
        return MultiGraph(self.vertices, tuple(e for e in self.edges if e[0] not in drop),
                          self.name, tuple(b for b in self.bridges if b not in drop))

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e, u, v in self.edges:
            g.add_edge(u, v, key=e)
        return g

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class Cycle:
    """A cycle given by its edges in traversal order and the vertices visited.

    ``vertices[i]`` is the start of ``edges[i]``; the walk returns to
    ``vertices[0]``.
    """

    edges: tuple[str, ...]
    vertices: tuple[str, ...]

    @property
    def edge_set(self) -> frozenset[str]:
        return frozenset(self.edges)

    @property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def __len__(self):
        return len(self.edges)


def cycles(g: MultiGraph) -> list[Cycle]:
    """Every cycle of ``g`` exactly once; loops come first as 1-edge cycles."""
    out = [Cycle((e,), (u,)) for e, u, v in g.edges if u == v]
    order = {v: i for i, v in enumerate(g.vertices)}
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for e, u, v in g.edges:
        if u != v:
            adj[u].append((e, v))
            adj[v].append((e, u))
    seen: set[frozenset[str]] = set()

    for anchor in g.vertices:
        a = order[anchor]
        path_v = [anchor]
        path_e: list[str] = []
        on_path = {anchor}

        def extend(x: str):
            for e, y in adj[x]:
                if y == anchor and path_e and e != path_e[0]:
                    key = frozenset(path_e + [e])
                    if key not in seen:
                        seen.add(key)
                        out.append(Cycle(tuple(path_e + [e]), tuple(path_v)))
                elif y not in on_path and order[y] > a:
                    path_v.append(y)
                    path_e.append(e)
                    on_path.add(y)
                    extend(y)
                    on_path.discard(y)
                    path_v.pop()
                    path_e.pop()

        extend(anchor)
    return out


def disjoint_cycle_pairs(g: MultiGraph, cycle_list: Sequence[Cycle] | None = None) -> list[tuple[Cycle, Cycle]]:
    """All unordered pairs of vertex-disjoint cycles."""
    cs = list(cycles(g) if cycle_list is None else cycle_list)
    return [(c1, c2) for c1, c2 in itertools.combinations(cs, 2)
            if not (c1.vertex_set & c2.vertex_set)]


def _fresh(prefix: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def nabla_y(g: MultiGraph, triangle: Sequence[str] | Cycle) -> MultiGraph:
    """Replace a triangle (three edge ids) by a star on a new vertex."""
    tri = tuple(triangle.edges if isinstance(triangle, Cycle) else triangle)
    em = g.edge_map
    if len(tri) != 3 or len(set(tri)) != 3 or any(t not in em for t in tri):
        raise GraphFormatError("triangle must be three distinct edges of g")
    corners: set[str] = set()
    for t in tri:
        u, v = em[t]
        if u == v:
            raise GraphFormatError("loop in triangle")
        corners |= {u, v}
    if len(corners) != 3 or any(sum(x in em[t] for t in tri) != 2 for x in corners):
        raise GraphFormatError("edges do not form a triangle on three vertices")
    centre = _fresh("y", g.vertices)
    eids = [e for e, _, _ in g.edges]
    new_edges = [e for e in g.edges if e[0] not in tri]
    for c in sorted(corners, key=g.vertices.index):
        eid = _fresh("s", eids)
        eids.append(eid)
        new_edges.append((eid, centre, c))
    return MultiGraph(g.vertices + (centre,), tuple(new_edges), g.name,
                      tuple(b for b in g.bridges if b not in tri))


def y_nabla(g: MultiGraph, v: str) -> MultiGraph:
    """Delete a degree-3 vertex with distinct neighbours and add the triangle on them."""
    inc = g.incident(v)
    nbrs = g.neighbors(v)
    if len(inc) != 3 or len(nbrs) != 3 or len(set(nbrs)) != 3 or v in nbrs:
        raise GraphFormatError(f"vertex {v} is not a degree-3 vertex with three distinct neighbours")
    eids = [e for e, _, _ in g.edges]
    new_edges = [e for e in g.edges if e[0] not in inc]
    for a, b in itertools.combinations(nbrs, 2):
        eid = _fresh("t", eids)
        eids.append(eid)
        new_edges.append((eid, a, b))
    return MultiGraph(tuple(x for x in g.vertices if x != v), tuple(new_edges), g.name,
                      tuple(b for b in g.bridges if b not in inc))


def simplify(g: MultiGraph) -> MultiGraph:
    """Drop loops and all but the first of each bundle of parallel edges."""
    seen = set()
    es = []
    for e, u, v in g.edges:
        key = frozenset((u, v))
        if u == v or key in seen:
            continue
        seen.add(key)
        es.append((e, u, v))
    return MultiGraph(g.vertices, tuple(es), g.name, tuple(b for b in g.bridges if b in {x[0] for x in es}))


def is_isomorphic(g: MultiGraph, h: MultiGraph) -> bool:
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return False
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())


def _wl(g: MultiGraph) -> str:
    return nx.weisfeiler_lehman_graph_hash(nx.Graph(g.to_networkx()), iterations=3) + \
        f":{len(g.vertices)}:{len(g.edges)}"


class _IsoSet:
    """Graphs deduplicated up to isomorphism (hash buckets, exact check inside)."""

    def __init__(self):
        self.buckets: dict[str, list[MultiGraph]] = {}

    def add(self, g: MultiGraph) -> bool:
        bucket = self.buckets.setdefault(_wl(g), [])
        if any(is_isomorphic(g, h) for h in bucket):
            return False
        bucket.append(g)
        return True

    def __contains__(self, g: MultiGraph) -> bool:
        return any(is_isomorphic(g, h) for h in self.buckets.get(_wl(g), []))

    def members(self) -> list[MultiGraph]:
        return [g for b in self.buckets.values() for g in b]


def complete_graph(n: int, name: str | None = None) -> MultiGraph:
    vs = [str(i) for i in range(1, n + 1)]
    es = [(f"{u}-{v}", u, v) for u, v in itertools.combinations(vs, 2)]
    return MultiGraph(tuple(vs), tuple(es), name or f"K{n}")


def petersen_graph() -> MultiGraph:
    outer = [(f"o{i}", f"o{(i + 1) % 5}") for i in range(5)]
    spokes = [(f"o{i}", f"i{i}") for i in range(5)]
    inner = [(f"i{i}", f"i{(i + 2) % 5}") for i in range(5)]
    es = [(f"{u}-{v}", u, v) for u, v in outer + spokes + inner]
    return MultiGraph.from_edges(es, name="Petersen")


def _exchanges(g: MultiGraph) -> list[MultiGraph]:
    out = []
    for c in cycles(g):
        if len(c) == 3:
            out.append(nabla_y(g, c))
    for v in g.vertices:
        nb = g.neighbors(v)
        if len(nb) == 3 and len(set(nb)) == 3 and v not in nb:
            out.append(simplify(y_nabla(g, v)))
    return out


_FAMILY_CACHE: list[MultiGraph] | None = None


def petersen_family() -> list[MultiGraph]:
    """Closure of K6 under triangle-star exchanges, one graph per isomorphism class."""
    global _FAMILY_CACHE
    if _FAMILY_CACHE is None:
        found = _IsoSet()
        seed = complete_graph(6)
        found.add(seed)
        queue = [seed]
        while queue:
            g = queue.pop(0)
            for h in _exchanges(g):
                if found.add(h):
                    queue.append(h)
        fam = sorted(found.members(), key=lambda x: (len(x.vertices), len(x.edges)))
        _FAMILY_CACHE = [MultiGraph(m.vertices, m.edges, f"P{i}" if i else "K6")
                         for i, m in enumerate(fam)]
    return list(_FAMILY_CACHE)


def star_connect(p: MultiGraph, q: MultiGraph, k: int,
                 attachment: Sequence[tuple[str, str]]) -> MultiGraph:
    """Disjoint union of ``p`` and ``q`` joined by ``k`` disjoint bridging edges.

    Vertices and edges of ``q`` get a trailing prime; bridges are named
    ``e1 .. ek`` and listed in ``bridges``.
    """
    if k not in (3, 4) or len(attachment) != k:
        raise GraphFormatError("need k in {3,4} attachment pairs")
    left = [a for a, _ in attachment]
    right = [b for _, b in attachment]
    if len(set(left)) != k or len(set(right)) != k:
        raise GraphFormatError("overlapping attachment vertices")
    if any(a not in p.vertices for a in left) or any(b not in q.vertices for b in right):
        raise GraphFormatError("attachment vertex not in its factor")
    vs = list(p.vertices) + [v + "'" for v in q.vertices]
    es = list(p.edges) + [(e + "'", u + "'", v + "'") for e, u, v in q.edges]
    bridges = []
    for i, (a, b) in enumerate(attachment, 1):
        bridges.append(f"e{i}")
        es.append((f"e{i}", a, b + "'"))
    return MultiGraph(tuple(vs), tuple(es), f"{p.name}*{k}{q.name}", tuple(bridges))


# ---------------------------------------------------------------- minors

@dataclass
class MinorResult:
    found: bool
    model: dict[str, frozenset[str]] | None
    nodes: int

    def __bool__(self):
        return self.found


def _budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("SG_BUDGET")
    return int(env) if env else DEFAULT_MINOR_BUDGET


def has_minor(g: MultiGraph, h: MultiGraph, budget: int | None = None,
              max_vertices: int = MAX_MINOR_VERTICES) -> MinorResult:
    """Decide whether the simple graph ``h`` is a minor of ``g``.

    Search over contractions/deletions of ``simplify(g)``; each state keeps a
    branch set per vertex, states are deduplicated up to isomorphism and each
    one is tested for a subgraph monomorphism of ``h``.
    """
    if len(g.vertices) > max_vertices:
        raise MinorBudgetExceeded(f"{len(g.vertices)} vertices exceeds bound {max_vertices}")
    if len(simplify(h).edges) != len(h.edges):
        raise GraphFormatError("target graph must be simple")
    limit = _budget(budget)
    target = nx.Graph()
    target.add_nodes_from(h.vertices)
    target.add_edges_from((u, v) for _, u, v in h.edges)
    nv, ne = target.number_of_nodes(), target.number_of_edges()

    start = nx.Graph()
    for v in g.vertices:
        start.add_node(v, branch=frozenset([v]))
    for _, u, v in g.edges:
        if u != v:
            start.add_edge(u, v)

    seen: dict[str, list[nx.Graph]] = {}
    stack = [start]
    nodes = 0
    while stack:
        state = stack.pop()
        if state.number_of_nodes() < nv or state.number_of_edges() < ne:
            continue
        key = nx.weisfeiler_lehman_graph_hash(state, iterations=3)
        bucket = seen.setdefault(key, [])
        if any(nx.is_isomorphic(state, other) for other in bucket):
            continue
        bucket.append(state)
        nodes += 1
        if nodes > limit:
            raise MinorBudgetExceeded(f"minor search exceeded {limit} nodes")
        gm = nxiso.GraphMatcher(state, target)
        for mapping in gm.subgraph_monomorphisms_iter():
            model = {hv: state.nodes[sv]["branch"] for sv, hv in mapping.items()}
            return MinorResult(True, model, nodes)
        if state.number_of_nodes() == nv:
            continue
        children = []
        for v in sorted(state.nodes, key=lambda x: (state.degree(x), str(x))):
            child = state.copy()
            child.remove_node(v)
            children.append(child)
        for u, v in sorted(state.edges, key=lambda e: (str(e[0]), str(e[1]))):
            child = nx.contracted_nodes(state, u, v, self_loops=False)
            child.nodes[u]["branch"] = state.nodes[u]["branch"] | state.nodes[v]["branch"]
            child.nodes[u].pop("contraction", None)
            children.append(child)
        # contractions last on the stack so they are explored first
        stack.extend(children)
    return MinorResult(False, None, nodes)


@dataclass
class LinkCertificate:
    status: str  # "CertifiedLinked" | "NotLinked" | "Unknown"
    member: str | None = None
    model: dict[str, frozenset[str]] | None = None
    reason: str = ""


def is_intrinsically_linked_cert(g: MultiGraph, budget: int | None = None) -> LinkCertificate:
    """Certify intrinsic linking by exhibiting a Petersen-family minor."""
    for member in petersen_family():
        try:
            res = has_minor(g, member, budget=budget)
        except MinorBudgetExceeded as exc:
            return LinkCertificate("Unknown", reason=str(exc))
        if res.found:
            return LinkCertificate("CertifiedLinked", member.name, res.model)
    return LinkCertificate("NotLinked")


# ---------------------------------------------------------------- text format

def parse_graph(text: str) -> MultiGraph:
    name = None
    vs: list[str] = []
    es: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "graph":
                name = parts[1] if len(parts) > 1 else "G"
            elif parts[0] == "v" and len(parts) == 2:
                vs.append(parts[1])
            elif parts[0] == "e" and len(parts) == 4:
                es.append((parts[1], parts[2], parts[3]))
            else:
                raise GraphFormatError(f"line {lineno}: unrecognised record {line!r}")
        except IndexError:
            raise GraphFormatError(f"line {lineno}: truncated record") from None
    if name is None:
        raise GraphFormatError("missing 'graph <name>' header")
    return MultiGraph(tuple(vs), tuple(es), name)


def serialize_graph(g: MultiGraph) -> str:
    lines = [f"graph {g.name}"]
    lines += [f"v {v}" for v in g.vertices]
    lines += [f"e {e} {u} {v}" for e, u, v in g.edges]
    return "\n".join(lines) + "\n"
