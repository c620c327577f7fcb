"""Certificates for linked pairs in Petersen-family embeddings and for P *3 P'.

The harness for P *3 P' follows the case analysis of the classical proof:
odd-linked cycle pairs are found in both factors; if two bridges join the
same pair of cycles a merged cycle gives a 3-component link whose pairwise
linking numbers form a connected graph; otherwise the four cycles and the
three bridges span a subgraph that contracts to P4, and a sub-handcuff
with nonzero n is extracted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .diagram import (Diagram, DiagramError, HandcuffDiagram, P4Diagram, contract_edges, restrict,
                      reverse, smooth_degree2, underlying_graph)
from .graphcore import (Cycle, MultiGraph, complete_graph, cycles, disjoint_cycle_pairs,
                        is_isomorphic, petersen_family)
from .invariants import handcuff_of, linking_number, n_invariant, xi

__all__ = [
    "LinkedTriple",
    "IrreducibleHandcuff",
    "DiagnosticFailure",
    "conway_gordon_parity",
    "odd_linked_pair",
    "find_star_bridges",
    "certify_theorem_main",
    "verify_certificate",
    "handcuff_survey",
]

DEFAULT_PAIR_BUDGET = 64


def _cycle_json(c: Cycle) -> dict:
    return {"edges": list(c.edges), "vertices": list(c.vertices)}


@dataclass(frozen=True)
class LinkedTriple:
    cycles: tuple[Cycle, Cycle, Cycle]
    linking: tuple[tuple[int, int, int], ...]  # (i, j, lk)
    case: str
    status: str = "LinkedTriple"

    def to_json(self) -> dict:
        return {"status": self.status, "case": self.case,
                "cycles": [_cycle_json(c) for c in self.cycles],
                "linking": [list(t) for t in self.linking]}


@dataclass(frozen=True)
class IrreducibleHandcuff:
    subgraph: tuple[str, ...]           # edges of F
    contracted: tuple[str, ...]         # bridges contracted to reach P4
    roles: tuple[tuple[str, tuple[str, ...]], ...]  # P4 role -> original edges
    hij: tuple[int, int]
    loops: tuple[tuple[str, bool], tuple[str, bool]]  # orientation reference per loop
    handcuff_edges: tuple[str, ...]     # edges of the handcuff inside the original graph
    lk: int
    n: int
    xi: int
    status: str = "IrreducibleHandcuff"

    def to_json(self) -> dict:
        return {"status": self.status, "subgraph": list(self.subgraph),
                "contracted": list(self.contracted),
                "roles": {r: list(es) for r, es in self.roles}, "H": f"H{self.hij[0]}{self.hij[1]}",
                "loops": [list(x) for x in self.loops], "handcuff_edges": list(self.handcuff_edges),
                "lk": self.lk, "n": self.n, "xi": self.xi}


@dataclass(frozen=True)
class DiagnosticFailure:
    reason: str
    tried: int
    status: str = "DiagnosticFailure"

    def to_json(self) -> dict:
        return {"status": self.status, "reason": self.reason, "tried": self.tried}


# ---------------------------------------------------------------- Conway-Gordon

def conway_gordon_parity(d: Diagram) -> dict:
    """Sum of linking numbers over the ten disjoint triangle pairs of a K6 embedding, mod 2."""
    g = underlying_graph(d)
    if not is_isomorphic(g, complete_graph(6)):
        raise DiagramError("underlying graph is not K6")
    pairs = disjoint_cycle_pairs(g)
    values = [(a, b, linking_number(d, a, b)) for a, b in pairs]
    total = sum(v for _, _, v in values)
    odd = [(a, b, v) for a, b, v in values if v % 2]
    return {"parity": total % 2, "sum": total, "pairs": values, "witness": odd[0] if odd else None}


def _family_member(g: MultiGraph):
    for member in petersen_family():
        if is_isomorphic(g, member):
            return member
    return None


def odd_linked_pair(d: Diagram) -> tuple[Cycle, Cycle, int]:
    g = underlying_graph(d)
    if _family_member(g) is None:
        raise DiagramError("not in Petersen family")
    for a, b in disjoint_cycle_pairs(g):
        v = linking_number(d, a, b)
        if v % 2:
            return a, b, v
    raise DiagramError("no odd linked pair found: contradicts the Conway-Gordon-Sachs theorem")


# ---------------------------------------------------------------- P *3 P'

def _components(g: MultiGraph, removed: set[str]) -> list[set[str]]:
    parent = {v: v for v in g.vertices}

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, u, v in g.edges:
        if e not in removed:
            parent[root(u)] = root(v)
    comps: dict[str, set[str]] = {}
    for v in g.vertices:
        comps.setdefault(root(v), set()).add(v)
    return list(comps.values())


def find_star_bridges(g: MultiGraph):
    """Locate the three bridges of P *3 P'; returns (bridges, side_P, side_P') or None."""
    candidates = []
    if g.bridges and len(g.bridges) == 3:
        candidates.append(tuple(g.bridges))
    names = [e for e, _, _ in g.edges]
    if all(f"e{i}" in names for i in (1, 2, 3)):
        candidates.append(("e1", "e2", "e3"))
    non_loops = [e for e, u, v in g.edges if u != v]
    candidates += list(itertools.combinations(non_loops, 3))
    em = g.edge_map
    checked = set()
    for trip in candidates:
        if trip in checked:
            continue
        checked.add(trip)
        ends = [v for e in trip for v in em[e]]
        if len(set(ends)) != 6:
            continue
        comps = _components(g, set(trip))
        if len(comps) != 2:
            continue
        a, b = comps
        if not all((em[e][0] in a) != (em[e][1] in a) for e in trip):
            continue
        ga = g.subgraph([e for e, u, v in g.edges if u in a and v in a and e not in trip])
        gb = g.subgraph([e for e, u, v in g.edges if u in b and v in b and e not in trip])
        ga = MultiGraph.from_edges(ga.edges, vertices=sorted(a))
        gb = MultiGraph.from_edges(gb.edges, vertices=sorted(b))
        if _family_member(ga) is None or _family_member(gb) is None:
            continue
        first = em[trip[0]][0]
        if first not in a:
            a, b, ga, gb = b, a, gb, ga
        return tuple(trip), ga, gb
    return None


def _odd_pairs(d: Diagram, g: MultiGraph, budget: int):
    out = []
    for a, b in disjoint_cycle_pairs(g):
        v = linking_number(d, a, b)
        if v % 2:
            out.append((a, b, v))
            if len(out) >= budget:
                break
    return out


def _walks(c: Cycle, x: str, y: str):
    """The two walks along cycle ``c`` from ``x`` to ``y`` as (edges, vertices)."""
    n = len(c.edges)
    i, j = c.vertices.index(x), c.vertices.index(y)
    fe, fv = [], []
    k = i
    while k != j:
        fe.append(c.edges[k])
        fv.append(c.vertices[k])
        k = (k + 1) % n
    be, bv = [], []
    k = i
    while k != j:
        be.append(c.edges[(k - 1) % n])
        bv.append(c.vertices[k])
        k = (k - 1) % n
    return [(fe, fv), (be, bv)]


def _lk_connected(d: Diagram, trip) -> tuple[bool, list]:
    vals = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        vals.append((i, j, linking_number(d, trip[i], trip[j])))
    nz = [(i, j) for i, j, v in vals if v != 0]
    return len(nz) >= 2, vals


def _disjoint(*cs: Cycle) -> bool:
    seen: set[str] = set()
    for c in cs:
        if seen & c.vertex_set:
            return False
        seen |= c.vertex_set
    return True


def certify_theorem_main(d: Diagram, pair_budget: int = DEFAULT_PAIR_BUDGET, bridges=None):
    """Certificate for an embedding of P *3 P' (see module docstring)."""
    g = underlying_graph(d)
    found = find_star_bridges(g) if bridges is None else None
    if bridges is not None:
        found = _sides_for(g, tuple(bridges))
    if found is None:
        raise DiagramError("underlying graph is not P*3P'")
    brs, gp, gq = found
    em = g.edge_map
    pairs_p = _odd_pairs(d, gp, pair_budget)
    pairs_q = _odd_pairs(d, gq, pair_budget)
    if not pairs_p or not pairs_q:
        return DiagnosticFailure("a factor has no odd linked pair", 0)
    tried = 0
    handcuff_candidates = []
    for (g1, g2, _), (h1, h2, _) in itertools.product(pairs_p, pairs_q):
        tried += 1
        four = [g1, g2, h1, h2]
        for trip in itertools.combinations(four, 3):
            ok, vals = _lk_connected(d, trip)
            if ok:
                return LinkedTriple(tuple(trip), tuple(vals), "four-cycles")
        # where does each bridge attach?
        attach = []
        for b in brs:
            x, y = em[b]
            if x in gq.vertices:
                x, y = y, x
            l = next((k for k, c in enumerate((g1, g2)) if x in c.vertex_set), None)
            k = next((k for k, c in enumerate((h1, h2)) if y in c.vertex_set), None)
            attach.append((b, l, k, x, y))
        if any(l is None or k is None for _, l, k, _, _ in attach):
            continue
        groups: dict[tuple, list] = {}
        for item in attach:
            groups.setdefault((item[1], item[2]), []).append(item)
        shared = [grp for grp in groups.values() if len(grp) >= 2]
        if shared:
            cert = _merged_triple(d, (g1, g2), (h1, h2), shared[0][:2])
            if cert is not None:
                return cert
            continue
        handcuff_candidates.append(((g1, g2), (h1, h2), attach))
    for (gs, hs, attach) in handcuff_candidates:
        cert = _handcuff_case(d, g, gs, hs, attach)
        if cert is not None:
            return cert
    return DiagnosticFailure("no certificate among the searched cycle pairs", tried)


def _sides_for(g: MultiGraph, brs: tuple):
    comps = _components(g, set(brs))
    if len(comps) != 2:
        return None
    a, b = comps
    em = g.edge_map
    if em[brs[0]][0] not in a:
        a, b = b, a
    ga = MultiGraph.from_edges([x for x in g.edges if x[1] in a and x[2] in a and x[0] not in brs],
                               vertices=sorted(a))
    gb = MultiGraph.from_edges([x for x in g.edges if x[1] in b and x[2] in b and x[0] not in brs],
                               vertices=sorted(b))
    return brs, ga, gb


def _merged_triple(d: Diagram, gs, hs, two):
    (ba, l, k, pa, qa), (bb, _, _, pb, qb) = two
    gl, hk = gs[l], hs[k]
    other_g, other_h = gs[1 - l], hs[1 - k]
    for (ge, gv), (he, hv) in itertools.product(_walks(gl, pa, pb), _walks(hk, qb, qa)):
        edges = tuple(ge) + (bb,) + tuple(he) + (ba,)
        verts = tuple(gv) + (pb,) + tuple(hv) + (qa,)
        c = Cycle(edges, verts)
        if not _disjoint(c, other_g, other_h):
            continue
        trip = (c, other_g, other_h)
        ok, vals = _lk_connected(d, trip)
        if ok:
            return LinkedTriple(trip, tuple(vals), "merged-cycle")
    return None


def _chain(attach):
    """Order the four cycles as a path X - Y - Z - W along the three bridges."""
    if len({(l, k) for _, l, k, _, _ in attach}) != len(attach):
        return None
    adj: dict[tuple, list] = {}
    for b, l, k, x, y in attach:
        adj.setdefault(("g", l), []).append((("h", k), b))
        adj.setdefault(("h", k), []).append((("g", l), b))
    ends = [n for n, lst in adj.items() if len(lst) == 1]
    if len(adj) != 4 or len(ends) != 2:
        return None
    start = min(ends)
    path, bridges = [start], []
    prev = None
    while len(path) < 4:
        nxt = [(n, b) for n, b in adj[path[-1]] if n != prev]
        prev = path[-1]
        path.append(nxt[0][0])
        bridges.append(nxt[0][1])
    return path, bridges


def _handcuff_case(d: Diagram, g: MultiGraph, gs, hs, attach):
    ch = _chain(attach)
    if ch is None:
        return None
    path, brs = ch
    cyc = {("g", 0): gs[0], ("g", 1): gs[1], ("h", 0): hs[0], ("h", 1): hs[1]}
    X, Y, Z, W = (cyc[n] for n in path)
    if linking_number(d, X, W) != 0:
        return None  # covered by the four-cycle triple search
    f_edges = tuple(sorted(set(X.edges) | set(Y.edges) | set(Z.edges) | set(W.edges) | set(brs)))
    sub = contract_edges(restrict(d, f_edges), brs)
    sub, hist = smooth_degree2(sub)
    owner = {}
    for new, olds in hist.items():
        for name, c in (("X", X), ("Y", Y), ("Z", Z), ("W", W)):
            if any(e in c.edge_set for e, _ in olds):
                owner[new] = name
    by = {n: sorted(e for e, o in owner.items() if o == n) for n in "XYZW"}
    if [len(by[n]) for n in "XYZW"] != [1, 2, 2, 1]:
        return None
    roles = {"e5": by["X"][0], "e1": by["Y"][0], "e2": by["Y"][1],
             "e3": by["Z"][0], "e4": by["Z"][1], "e6": by["W"][0]}
    try:
        p4 = P4Diagram.from_diagram(sub.with_roles(roles))
    except DiagramError:
        return None
    value = xi(p4)
    if value == 0:
        return None
    for i, j in ((1, 3), (1, 4), (2, 3), (2, 4)):
        h = handcuff_of(p4, i, j)
        inv = n_invariant(h)
        if inv.n_value == 0:
            continue
        hedges = tuple(e for r in ("e5", f"e{i}", f"e{j}", "e6") for e, _ in hist[roles[r]]) + tuple(brs)
        loops = (hist[roles["e5"]][0], hist[roles["e6"]][0])
        return IrreducibleHandcuff(
            subgraph=f_edges, contracted=tuple(brs),
            roles=tuple((r, tuple(e for e, _ in hist[roles[r]])) for r in sorted(roles)),
            hij=(i, j), loops=loops, handcuff_edges=tuple(sorted(hedges)),
            lk=linking_number(h.diagram, h.loop1, h.loop2), n=inv.n_value, xi=value)
    return None


# ---------------------------------------------------------------- verification

def verify_certificate(d: Diagram, cert) -> tuple[bool, str]:
    """Recompute a certificate from the cited part of ``d``."""
    if isinstance(cert, LinkedTriple):
        if not _disjoint(*cert.cycles):
            return False, "cycles are not disjoint"
        ok, vals = _lk_connected(d, cert.cycles)
        if tuple(vals) != tuple(cert.linking):
            return False, f"linking numbers recompute to {vals}"
        return ok, "ok" if ok else "lk graph disconnected"
    if isinstance(cert, IrreducibleHandcuff):
        sub = restrict(d, cert.handcuff_edges)
        sub, hist = smooth_degree2(sub)
        g = underlying_graph(sub)
        loops = [e for e, u, v in g.edges if u == v]
        if len(loops) != 2 or len(g.edges) != 3:
            return False, "cited edges do not form a handcuff"
        named = []
        for ref_edge, ref_dir in cert.loops:
            loop = next(e for e in loops if any(x == ref_edge for x, _ in hist[e]))
            flag = next(f for x, f in hist[loop] if x == ref_edge)
            if flag != ref_dir:
                sub = reverse(sub, loop)
            named.append(loop)
        edge = next(e for e, u, v in g.edges if u != v)
        h = HandcuffDiagram.from_diagram(sub.with_roles({"loop1": named[0], "loop2": named[1], "edge": edge}))
        lk = linking_number(h.diagram, h.loop1, h.loop2)
        inv = n_invariant(h)
        if lk != 0:
            return False, f"constituent link has lk {lk}"
        if inv.n_value != cert.n or inv.n_value == 0:
            return False, f"n recomputes to {inv.n_value}"
        return True, "ok"
    return False, "not a certificate"


# ---------------------------------------------------------------- example witnesses

def handcuff_survey(d: Diagram, pair_budget: int = DEFAULT_PAIR_BUDGET) -> dict:
    """All lk-split handcuffs the harness would consider, with their n values.

    Also reports whether every 3-cycle sublink among the searched pairs is
    split-looking by linking numbers.
    """
    g = underlying_graph(d)
    found = find_star_bridges(g)
    if found is None:
        raise DiagramError("underlying graph is not P*3P'")
    brs, gp, gq = found
    em = g.edge_map
    values, triples_split = [], True
    for (g1, g2, _), (h1, h2, _) in itertools.product(_odd_pairs(d, gp, pair_budget),
                                                      _odd_pairs(d, gq, pair_budget)):
        for trip in itertools.combinations([g1, g2, h1, h2], 3):
            if _lk_connected(d, trip)[0]:
                triples_split = False
        attach = []
        for b in brs:
            x, y = em[b]
            if x in gq.vertices:
                x, y = y, x
            l = next((k for k, c in enumerate((g1, g2)) if x in c.vertex_set), None)
            k = next((k for k, c in enumerate((h1, h2)) if y in c.vertex_set), None)
            attach.append((b, l, k, x, y))
        if any(l is None or k is None for _, l, k, _, _ in attach):
            continue
        ch = _chain(attach)
        if ch is None:
            continue
        path, bridges = ch
        cyc = {("g", 0): g1, ("g", 1): g2, ("h", 0): h1, ("h", 1): h2}
        X, Y, Z, W = (cyc[n] for n in path)
        if linking_number(d, X, W) != 0:
            continue
        f_edges = set(X.edges) | set(Y.edges) | set(Z.edges) | set(W.edges) | set(bridges)
        sub, hist = smooth_degree2(contract_edges(restrict(d, sorted(f_edges)), bridges))
        owner = {}
        for new, olds in hist.items():
            for name, c in (("X", X), ("Y", Y), ("Z", Z), ("W", W)):
                if any(e in c.edge_set for e, _ in olds):
                    owner[new] = name
        by = {n: sorted(e for e, o in owner.items() if o == n) for n in "XYZW"}
        if [len(by[n]) for n in "XYZW"] != [1, 2, 2, 1]:
            continue
        roles = {"e5": by["X"][0], "e1": by["Y"][0], "e2": by["Y"][1],
                 "e3": by["Z"][0], "e4": by["Z"][1], "e6": by["W"][0]}
        p4 = P4Diagram.from_diagram(sub.with_roles(roles))
        for i, j in ((1, 3), (1, 4), (2, 3), (2, 4)):
            values.append(n_invariant(handcuff_of(p4, i, j)).n_value)
    return {"handcuff_n": values, "triples_split": triples_split}
