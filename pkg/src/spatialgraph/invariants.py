"""Linking numbers, Conway polynomial, a2, the handcuff invariant n and xi."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .diagram import (Diagram, DiagramError, HandcuffDiagram, P4Diagram, _chains, restrict,
                      smooth_degree2, underlying_graph)
from .graphcore import Cycle

__all__ = [
    "ConwayPoly",
    "SkeinBudgetExceeded",
    "HandcuffInvariant",
    "linking_number",
    "cycle_linking_number",
    "conway",
    "a2",
    "a2_gauss",
    "n_invariant",
    "xi",
    "irreducibility_certificate",
    "IrreducibleCertified",
    "Unknown",
]

DEFAULT_SKEIN_BUDGET = 10 ** 6


def _budget(default: int) -> int:
    env = os.environ.get("SG_BUDGET")
    return int(env) if env else default


class SkeinBudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- linking numbers

def _orientation_of(d: Diagram, comp) -> dict[str, int]:
    """Edge -> +1/-1 for an oriented component.

    ``comp`` is an edge id (a closed strand or loop), a sequence of edge
    ids taken in their own direction, or a :class:`Cycle` (direction from
    its vertex sequence).
    """
    if isinstance(comp, str):
        return {comp: 1}
    if isinstance(comp, Cycle):
        g = underlying_graph(d)
        out = {}
        for i, e in enumerate(comp.edges):
            u, v = g.edge(e)
            if u == v:
                out[e] = 1
            else:
                start = comp.vertices[i]
                out[e] = 1 if u == start else -1
        return out
    return {e: 1 for e in comp}


def linking_number(d: Diagram, comp_a, comp_b) -> int:
    """Half the signed count of crossings between two disjoint oriented cycles."""
    oa, ob = _orientation_of(d, comp_a), _orientation_of(d, comp_b)
    if set(oa) & set(ob):
        raise DiagramError("components are not disjoint")
    lab = d.label
    total = 0
    for x in d.crossings:
        eu, eo = lab[x.arcs[0]], lab[x.arcs[1]]
        if eu in oa and eo in ob:
            total += x.sign * oa[eu] * ob[eo]
        elif eu in ob and eo in oa:
            total += x.sign * ob[eu] * oa[eo]
    if total % 2:
        raise DiagramError("odd crossing sum: components are not closed")
    return total // 2


def cycle_linking_number(d: Diagram, c1: Cycle, c2: Cycle) -> int:
    if c1.vertex_set & c2.vertex_set:
        raise DiagramError("cycles share a vertex")
    return linking_number(d, c1, c2)


# ---------------------------------------------------------------- Conway polynomial

@dataclass(frozen=True)
class ConwayPoly:
    coeffs: tuple[int, ...]  # coeffs[i] is the coefficient of z^i

    @classmethod
    def of(cls, coeffs: Sequence[int]) -> "ConwayPoly":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                terms.append(("-" if c < 0 else "+") + mono)
            else:
                terms.append(f"{c:+d}{mono}")
        s = "".join(terms).lstrip("+")
        return s or "0"


class _Link:
    """Bare PD code used inside the skein recursion.

    ``xs[i] = (a, b, c, d, b_in)``; ``free`` counts crossing-free circles.
    """

    __slots__ = ("xs", "free")

    def __init__(self, xs, free):
        self.xs = xs
        self.free = free

    @classmethod
    def from_diagram(cls, d: Diagram) -> "_Link":
        if d.vertices:
            raise DiagramError("expected a link diagram without flat vertices")
        return cls([(*x.arcs, x.over_in_b) for x in d.crossings], len(d.free_arcs))

    def incoming(self):
        """arc -> (crossing index, slot) of its head."""
        inc = {}
        for i, (a, b, c, d, bi) in enumerate(self.xs):
            inc[a] = (i, 0)
            inc[b if bi else d] = (i, 1 if bi else 3)
        return inc

    def traverse(self):
        """Components from basepoints; returns ([[(crossing, slot) ...]], n_components)."""
        inc = self.incoming()
        arcs = sorted(inc)
        seen = set()
        comps = []
        for a0 in arcs:
            if a0 in seen:
                continue
            seq = []
            a = a0
            while a not in seen:
                seen.add(a)
                i, s = inc[a]
                seq.append((i, s))
                a = self.xs[i][(s + 2) % 4]
            comps.append(seq)
        return comps, len(comps) + self.free

    def canonical(self):
        comps, _ = self.traverse()
        # relabel arcs by first visit
        ren = {}
        for seq in comps:
            for i, s in seq:
                a = self.xs[i][s]
                if a not in ren:
                    ren[a] = len(ren)
        xs = tuple(sorted((ren[a], ren[b], ren[c], ren[d], bi) for a, b, c, d, bi in self.xs))
        return xs, self.free

    def switched(self, i):
        a, b, c, d, bi = self.xs[i]
        new = (b, c, d, a, False) if bi else (d, a, b, c, True)
        xs = list(self.xs)
        xs[i] = new
        return _Link(xs, self.free)

    def smoothed(self, i):
        a, b, c, d, bi = self.xs[i]
        o_in, o_out = (b, d) if bi else (d, b)
        xs = [x for k, x in enumerate(self.xs) if k != i]
        free = self.free
        pairs = [(a, o_out), (o_in, c)]
        for k in range(2):
            src, dst = pairs[k]
            if src == dst:
                free += 1
                continue
            xs = [(*(src if v == dst else v for v in x[:4]), x[4]) for x in xs]
            pairs = [(src if p == dst else p, src if q == dst else q) for p, q in pairs]
        return _Link(xs, free)


def _sign(x) -> int:
    return -1 if x[4] else 1


def _add(p, q, shift=0, scale=1, limit=None):
    n = max(len(p), len(q) + shift)
    if limit is not None:
        n = min(n, limit + 1)
    out = [0] * n
    for i, c in enumerate(p[:n]):
        out[i] += c
    for i, c in enumerate(q):
        if i + shift < n:
            out[i + shift] += scale * c
    return out


def _nabla(link: _Link, limit: int | None, memo: dict, counter: list, budget: int):
    counter[0] += 1
    if counter[0] > budget:
        raise SkeinBudgetExceeded(f"skein budget of {budget} nodes exceeded")
    comps, mu = link.traverse()
    if limit is not None and mu - 1 > limit:
        return []
    key = (link.canonical(), limit)
    if key in memo:
        return memo[key]
    seen = set()
    pick = None
    for seq in comps:
        for i, s in seq:
            if i in seen:
                continue
            seen.add(i)
            if s == 0:  # first met as under-strand: not descending
                pick = i
                break
        if pick is not None:
            break
    if pick is None:
        res = [1] if mu == 1 else []
    else:
        eps = _sign(link.xs[pick])
        sub_limit = None if limit is None else limit - 1
        p = _nabla(link.switched(pick), limit, memo, counter, budget)
        q = _nabla(link.smoothed(pick), sub_limit, memo, counter, budget) if sub_limit is None or sub_limit >= 0 else []
        res = _add(p, q, shift=1, scale=eps, limit=limit)
        while res and res[-1] == 0:
            res.pop()
    memo[key] = res
    return res


def conway(d: Diagram, max_degree: int | None = None, budget: int | None = None) -> ConwayPoly:
    """Conway polynomial by skein recursion toward descending diagrams.

    With ``max_degree`` only coefficients up to that degree are computed;
    branches that cannot contribute (too many components) are pruned.
    """
    link = _Link.from_diagram(d)
    budget = budget if budget is not None else _budget(DEFAULT_SKEIN_BUDGET)
    return ConwayPoly.of(_nabla(link, max_degree, {}, [0], budget))


def _require_knot(d: Diagram):
    link = _Link.from_diagram(d)
    _, mu = link.traverse()
    if mu != 1:
        raise DiagramError(f"expected a knot, got {mu} components")
    return link


def a2(d: Diagram, method: str = "skein", budget: int | None = None) -> int:
    """Coefficient of z^2 in the Conway polynomial of a knot diagram."""
    _require_knot(d)
    if method == "gauss":
        return a2_gauss(d)
    return conway(d, max_degree=2, budget=budget)[2]


def a2_gauss(d: Diagram) -> int:
    """a2 from the Gauss diagram: sum of sign products over chord pairs met
    in the order under(X), over(Y), over(X), under(Y) from the basepoint."""
    link = _require_knot(d)
    comps, _ = link.traverse()
    seq = comps[0] if comps else []
    pos_u, pos_o = {}, {}
    for k, (i, s) in enumerate(seq):
        (pos_u if s == 0 else pos_o)[i] = k
    total = 0
    ids = list(pos_u)
    for x in ids:
        ux, ox = pos_u[x], pos_o[x]
        if ux > ox:
            continue
        for y in ids:
            if y == x:
                continue
            uy, oy = pos_u[y], pos_o[y]
            if ux < oy < ox < uy:
                total += _sign(link.xs[x]) * _sign(link.xs[y])
    return total


# ---------------------------------------------------------------- handcuff invariant

@dataclass(frozen=True)
class HandcuffInvariant:
    n_value: int
    modulus: int
    reduced: int
    a2_sum: int = 0
    a2_loops: tuple[int, int] = (0, 0)

    def to_json(self) -> dict:
        return {"n": self.n_value, "modulus": self.modulus, "reduced": self.reduced}


def _reduce(n: int, modulus: int) -> int:
    return n % modulus if modulus else n


def n_invariant(f: HandcuffDiagram, twist: int = 0, budget: int | None = None) -> HandcuffInvariant:
    """n(f, D) for the blackboard band (plus ``twist`` full band twists)."""
    from .surgery import d_sum

    d = f.diagram
    lk = linking_number(d, f.loop1, f.loop2)
    k = d_sum(f, twist=twist).knot
    ak = a2(k, budget=budget)
    l1 = a2(_as_knot(d, f.loop1), budget=budget)
    l2 = a2(_as_knot(d, f.loop2), budget=budget)
    n = ak - l1 - l2
    return HandcuffInvariant(n, abs(lk), _reduce(n, abs(lk)), ak, (l1, l2))


def _as_knot(d: Diagram, loop: str) -> Diagram:
    sub, _ = smooth_degree2(restrict(d, [loop]))
    return sub


def xi(f: P4Diagram, budget: int | None = None) -> int:
    """Alternating sum n(H13) - n(H14) - n(H23) + n(H24)."""
    r = f.role
    lk = linking_number(f.diagram, f.cycle(1), f.cycle(4))
    if lk != 0:
        raise DiagramError(f"xi needs lk(c1, c4) = 0, got {lk}")
    total = 0
    for i, j in ((1, 3), (1, 4), (2, 3), (2, 4)):
        h = handcuff_of(f, i, j)
        total += (-1) ** (i + j) * n_invariant(h, budget=budget).n_value
    return total


def handcuff_of(f: P4Diagram, i: int, j: int) -> HandcuffDiagram:
    """f restricted to H_ij with the middle vertex suppressed."""
    r = f.role
    sub = restrict(f.diagram, f.handcuff_edges(i, j))
    g = underlying_graph(sub)
    loops = {r["e5"], r["e6"]}
    keep = [v for v in g.vertices if any(e in loops for e in g.incident(v))]
    sub, hist = smooth_degree2(sub, keep=keep)
    edge = next(e for e in hist if e not in loops)
    d = sub.with_roles({"loop1": r["e5"], "loop2": r["e6"], "edge": edge})
    return HandcuffDiagram.from_diagram(d)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class IrreducibleCertified:
    invariant: HandcuffInvariant
    status: str = "IrreducibleCertified"


@dataclass(frozen=True)
class Unknown:
    invariant: HandcuffInvariant
    status: str = "Unknown"


def irreducibility_certificate(f: HandcuffDiagram):
    inv = n_invariant(f)
    if inv.reduced != 0:
        return IrreducibleCertified(inv)
    return Unknown(inv)
