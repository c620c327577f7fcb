"""The acceptance battery, shared by ``sg suite`` and the test suite.

Each check takes a seeded RNG and a scale factor (1.0 is the full battery)
and returns a :class:`CheckResult`.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .corpus import (clasp_handcuff, from_pd, knot_table, random_handcuff, standard, star_k6,
                     tie_handcuff, trivial_handcuff)
from .diagram import (DiagramError, HandcuffDiagram, P4Diagram, smooth_crossing, switch)
from .drawing import DrawingError, k6_standard, random_knot
from .graphcore import complete_graph, is_isomorphic, petersen_family, petersen_graph
from .invariants import (IrreducibleCertified, a2, a2_gauss, irreducibility_certificate,
                         linking_number, n_invariant, xi)
from .moves import apply, find_sites, random_moves
from .surgery import band_twist, d_sum, gen_frs, gen_hrs
from .theorems import DiagnosticFailure, certify_theorem_main, conway_gordon_parity, verify_certificate

__all__ = ["CheckResult", "CHECKS", "run_suite"]


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    limit: float | None = None
    failures: list = field(default_factory=list)

    @property
    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3), "failures": self.failures[:10]}


def _grid(scale: float):
    k = 3 if scale >= 1 else 1
    return [(r, s) for r in range(-k, k + 1) for s in range(-k, k + 1)]


def check_nf_irr(rng, scale):
    bad = [(r, s, v) for r, s in _grid(scale)
           if (v := n_invariant(gen_frs(r, s)).n_value) != 2 * r * s]
    return not bad, f"{len(_grid(scale))} pairs, n(f_rs) = 2rs", bad


def check_keylemma(rng, scale):
    bad = []
    for r, s in _grid(scale):
        v = xi(gen_hrs(r, s))
        if v != 2 * r * s or (r * s != 0) != (v != 0):
            bad.append((r, s, v))
    return not bad, f"{len(_grid(scale))} pairs, xi(h_rs) = 2rs", bad


def _random_knots(rng, count, max_crossings, points=8):
    out = []
    while len(out) < count:
        k = random_knot(rng.randint(5, points), rng)
        if 0 < len(k.crossings) <= max_crossings:
            out.append(k)
    return out


def check_skein(rng, scale):
    knots = [standard("trefoil"), standard("figure8")]
    knots += [from_pd(k["pd"]) for k in knot_table()[: int(10 * scale) or 3]]
    knots += _random_knots(rng, max(2, int(8 * scale)), 10)
    bad, total = [], 0
    for k in knots:
        for x in k.crossings:
            kp, km = (k, switch(k, x.id)) if x.sign > 0 else (switch(k, x.id), k)
            lk = linking_number(smooth_crossing(k, x.id), "c1", "c2")
            total += 1
            if a2(kp) - a2(km) != lk:
                bad.append((len(k.crossings), x.id))
    return not bad, f"{len(knots)} diagrams, {total} switches", bad


def check_a2_agreement(rng, scale):
    table = knot_table()
    knots = [from_pd(k["pd"]) for k in (table if scale >= 1 else table[:15])]
    knots += _random_knots(rng, int(100 * scale) or 5, 12, points=9)
    bad = [i for i, k in enumerate(knots) if a2(k) != a2_gauss(k)]
    return not bad, f"{len(knots)} diagrams ({len(knots) - len(table) if scale >= 1 else '-'} random)", bad


def _lk0_handcuff(rng):
    while True:
        h = random_handcuff(rng)
        if linking_number(h.diagram, h.loop1, h.loop2) == 0:
            return h


def check_moves(rng, scale):
    trials = max(2, int(50 * scale))
    steps = 20
    bad = []
    cap = 14
    applied = 0
    links = [standard("hopf")]
    for t in range(trials):
        d, used = random_moves(links[0], steps, rng, max_crossings=cap)
        applied += len(used)
        if linking_number(d, "a", "b") != 1:
            bad.append(("lk", t))
        k = standard("trefoil" if t % 2 else "figure8")
        want = a2(k)
        d, used = random_moves(k, steps, rng, max_crossings=cap)
        applied += len(used)
        if a2(d) != want:
            bad.append(("a2", t))
        h = _lk0_handcuff(rng)
        want = n_invariant(h).n_value
        d, used = random_moves(h.diagram, steps, rng, max_crossings=cap + 4)
        applied += len(used)
        if n_invariant(HandcuffDiagram.from_diagram(d)).n_value != want:
            bad.append(("n", t))
        r, s = rng.randint(-1, 1), rng.randint(-1, 1)
        p = gen_hrs(r, s)
        d, used = random_moves(p.diagram, steps, rng, max_crossings=len(p.diagram.crossings) + 6)
        applied += len(used)
        if xi(P4Diagram.from_diagram(d)) != 2 * r * s:
            bad.append(("xi", t))
    ok = not bad and applied == 4 * trials * steps
    return ok, f"{trials} trials x {steps} steps for lk, a2, n, xi ({applied} moves applied)", bad


def _delta_sites(d, forbidden_pair):
    """Delta sites made from R3 triangles by one crossing change off ``forbidden_pair``."""
    out = []
    for site in find_sites(d, "r3"):
        for cid in site.crossings:
            x = d.crossing(cid)
            if {d.label[x.arcs[0]], d.label[x.over_in]} == forbidden_pair:
                continue
            d2 = switch(d, cid)
            hits = [z for z in find_sites(d2, "delta") if set(z.crossings) == set(site.crossings)]
            if hits:
                out.append((d2, hits[0]))
                break
    return out


def check_delta(rng, scale):
    target = max(4, int(40 * scale))
    seen = {"two": 0, "three": 0, "one": 0}
    bad = []
    attempts = 0
    while (seen["two"] + seen["three"] < target or not seen["two"] or not seen["three"]) \
            and attempts < 50 * target:
        attempts += 1
        h = _lk0_handcuff(rng)
        d, _ = random_moves(h.diagram, 8, rng, kinds=("r2+", "r3"), max_crossings=16)
        loops = {h.loop1, h.loop2}
        for d2, site in _delta_sites(d, loops)[:3]:
            labs = {d2.label[a] for a, _ in site.darts}
            kind = "three" if labs == loops | {h.edge} else "two" if labs == loops else "one"
            before = n_invariant(HandcuffDiagram.from_diagram(d2)).n_value
            after = n_invariant(HandcuffDiagram.from_diagram(apply(d2, site))).n_value
            delta = after - before
            seen[kind] += 1
            ok = {"one": delta == 0, "two": abs(delta) == 1, "three": delta in (-2, 0, 2)}[kind]
            if not ok:
                bad.append((kind, delta))
    xi_runs = 0
    for t in range(max(3, int(20 * scale))):
        r, s = rng.randint(-1, 1), rng.randint(-1, 1)
        p = gen_hrs(r, s)
        d, _ = random_moves(p.diagram, 8, rng, kinds=("r2+", "r3"), max_crossings=len(p.diagram.crossings) + 8)
        for d2, site in _delta_sites(d, {"e5", "e6"})[:2]:
            try:
                before = xi(P4Diagram.from_diagram(d2))
                after = xi(P4Diagram.from_diagram(apply(d2, site)))
            except DiagramError:
                continue
            xi_runs += 1
            if before != after:
                bad.append(("xi", before, after))
    enough = seen["two"] > 0 and seen["three"] > 0 and xi_runs > 0
    detail = f"{seen['two']} two-loop, {seen['three']} three-strand, {seen['one']} one-loop sites; {xi_runs} P4 Delta moves"
    return not bad and enough, detail, bad


def check_band_twist(rng, scale):
    fixtures = [clasp_handcuff(k) for k in (-2, -1, 1, 2, 3)]
    fixtures += [trivial_handcuff(), gen_frs(1, 1), gen_frs(-1, 2),
                 tie_handcuff(standard("trefoil"), standard("figure8"))]
    fixtures += [random_handcuff(rng) for _ in range(max(2, int(6 * scale)))]
    bad, nonzero_lk = [], 0
    for i, h in enumerate(fixtures):
        base = n_invariant(h)
        nonzero_lk += base.modulus != 0
        rec = d_sum(h)
        for k in (-2, -1, 1, 2):
            knot = band_twist(rec, k).knot
            n = a2(knot) - base.a2_loops[0] - base.a2_loops[1]
            m = base.modulus
            if (n % m if m else n) != base.reduced:
                bad.append((i, k))
    ok = not bad and nonzero_lk > 0 and len(fixtures) >= 10
    return ok, f"{len(fixtures)} handcuffs ({nonzero_lk} with lk != 0), k in [-2, 2]", bad


def check_petersen(rng, scale):
    fam = petersen_family()
    has_k6 = any(is_isomorphic(g, complete_graph(6)) for g in fam)
    has_p = any(is_isomorphic(g, petersen_graph()) for g in fam)
    distinct = all(not is_isomorphic(a, b) for i, a in enumerate(fam) for b in fam[i + 1:])
    ok = len(fam) == 7 and has_k6 and has_p and distinct
    return ok, f"{len(fam)} classes, K6 {has_k6}, Petersen {has_p}", [] if ok else [len(fam)]


def check_conway_gordon(rng, scale):
    base = k6_standard()
    ids = [x.id for x in base.crossings]
    bad = []
    count = max(5, int(100 * scale))
    for t in range(count):
        d = base
        for cid in ids:
            if rng.random() < 0.5:
                d = switch(d, cid)
        res = conway_gordon_parity(d)
        if res["parity"] != 1:
            bad.append(t)
    return not bad, f"{count} crossing-change variants of the standard K6", bad


def check_theorem_main(rng, scale):
    count = max(6, int(200 * scale))
    bad, kinds = [], {"LinkedTriple": 0, "IrreducibleHandcuff": 0}
    verts = [str(i) for i in range(1, 7)]
    for t in range(count):
        attachment = None
        if t % 4 >= 2:
            attachment = list(zip(rng.sample(verts, 3), rng.sample(verts, 3)))
        d = star_k6(rng, attachment, separated=t % 2 == 0)
        if t % 3 == 2:
            for x in d.crossings:
                if rng.random() < 0.3:
                    d = switch(d, x.id)
        cert = certify_theorem_main(d)
        if isinstance(cert, DiagnosticFailure):
            bad.append((t, cert.reason))
            continue
        ok, why = verify_certificate(d, cert)
        if not ok:
            bad.append((t, why))
        kinds[cert.status] += 1
    return not bad, f"{count} embeddings: {kinds['LinkedTriple']} LinkedTriple, " \
                    f"{kinds['IrreducibleHandcuff']} IrreducibleHandcuff", bad


def check_contrapositive(rng, scale):
    names = ["unknot", "trefoil", "figure8"]
    bad = []
    pairs = [(a, b) for a in names for b in names]
    for a, b in pairs:
        if n_invariant(tie_handcuff(standard(a), standard(b))).n_value != 0:
            bad.append(("tie", a, b))
    grid = [(r, s) for r, s in _grid(scale) if r * s != 0]
    for r, s in grid:
        if not isinstance(irreducibility_certificate(gen_frs(r, s)), IrreducibleCertified):
            bad.append(("frs", r, s))
    return not bad, f"{len(pairs)} reducible fixtures with n = 0, {len(grid)} f_rs certified", bad


CHECKS = [
    (1, "n(f_rs) = 2rs", check_nf_irr, 60),
    (2, "xi(h_rs) = 2rs", check_keylemma, 120),
    (3, "skein identity", check_skein, None),
    (4, "a2 skein vs Gauss", check_a2_agreement, None),
    (5, "Reidemeister invariance", check_moves, None),
    (6, "Delta-move differences", check_delta, None),
    (7, "band-twist independence", check_band_twist, None),
    (8, "Petersen family closure", check_petersen, 10),
    (9, "Conway-Gordon parity", check_conway_gordon, 30),
    (10, "theorem-main certificates", check_theorem_main, 600),
    (11, "reducible fixtures and f_rs", check_contrapositive, None),
]


def run_check(number: int, seed: int = 7, scale: float = 1.0) -> CheckResult:
    num, name, fn, limit = next(c for c in CHECKS if c[0] == number)
    rng = random.Random(f"{seed}:{num}")
    t0 = time.perf_counter()
    try:
        ok, detail, failures = fn(rng, scale)
    except (DiagramError, DrawingError) as exc:
        ok, detail, failures = False, f"error: {exc}", [str(exc)]
    dt = time.perf_counter() - t0
    if limit is not None and scale >= 1 and dt > limit:
        ok, detail = False, detail + f"; over the {limit}s limit"
    return CheckResult(num, name, ok, detail, dt, limit, [repr(f) for f in failures])


def run_suite(numbers=None, seed: int = 7, scale: float = 1.0, jobs: int = 1) -> list[CheckResult]:
    numbers = list(numbers or [c[0] for c in CHECKS])
    if jobs <= 1:
        return [run_check(n, seed, scale) for n in numbers]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(jobs) as pool:
        futures = [pool.submit(run_check, n, seed, scale) for n in numbers]
        return [f.result() for f in futures]
