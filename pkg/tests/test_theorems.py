import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spatialgraph.corpus import example_witnesses, star_k6
from spatialgraph.diagram import DiagramError, switch
from spatialgraph.drawing import DrawingError, k6_points_standard, k6_standard, random_points, random_straight, \
    straight_graph
from spatialgraph.graphcore import complete_graph, disjoint_cycle_pairs, petersen_family, star_connect
from spatialgraph.invariants import linking_number
from spatialgraph.theorems import (DiagnosticFailure, IrreducibleHandcuff, LinkedTriple, certify_theorem_main,
                                   conway_gordon_parity, handcuff_survey, odd_linked_pair, verify_certificate)


# ---------------------------------------------------------------- geometric oracle

def _crossings_2d(p0, p1, q0, q1):
    """Parameters (t, u) where the xz-projections of two segments cross, or None."""
    ax, az = p1[0] - p0[0], p1[2] - p0[2]
    bx, bz = q1[0] - q0[0], q1[2] - q0[2]
    den = ax * bz - az * bx
    if den == 0:
        return None
    cx, cz = q0[0] - p0[0], q0[2] - p0[2]
    t = Fraction(cx * bz - cz * bx, den)
    u = Fraction(cx * az - cz * ax, den)
    if 0 < t < 1 and 0 < u < 1:
        return t, u
    return None


def geometric_lk(P, Q):
    """Linking number of two closed 3D polygons, read off their projection along y.

    Independent of the diagram code: it uses a different projection direction
    and works straight from the coordinates.
    """
    total = 0
    for i in range(len(P)):
        p0, p1 = P[i], P[(i + 1) % len(P)]
        for j in range(len(Q)):
            q0, q1 = Q[j], Q[(j + 1) % len(Q)]
            hit = _crossings_2d(p0, p1, q0, q1)
            if hit is None:
                continue
            t, u = hit
            yp = p0[1] + t * (p1[1] - p0[1])
            yq = q0[1] + u * (q1[1] - q0[1])
            a = (p1[0] - p0[0], p1[2] - p0[2])
            b = (q1[0] - q0[0], q1[2] - q0[2])
            cross = a[0] * b[1] - a[1] * b[0]
            total += (1 if cross > 0 else -1) * (1 if yp < yq else -1)
    assert total % 2 == 0
    return total // 2


def polygon(pts, cycle):
    return [pts[v] for v in cycle.vertices]


HOPF_PTS = {"a": (0, 0, 0), "b": (10, 1, 0), "c": (5, 10, 1), "p": (5, 3, -5), "q": (6, 4, 5), "r": (4, -10, 1)}
HOPF_EDGES = [("ab", "a", "b"), ("bc", "b", "c"), ("ca", "c", "a"),
              ("pq", "p", "q"), ("qr", "q", "r"), ("rp", "r", "p")]


def _calibrate():
    """Relative sign between the two projection conventions, fixed on a Hopf pair."""
    from spatialgraph.graphcore import Cycle
    d = straight_graph(HOPF_PTS, HOPF_EDGES)
    A = Cycle(("ab", "bc", "ca"), ("a", "b", "c"))
    B = Cycle(("pq", "qr", "rp"), ("p", "q", "r"))
    ours, geo = linking_number(d, A, B), geometric_lk(polygon(HOPF_PTS, A), polygon(HOPF_PTS, B))
    assert abs(ours) == abs(geo) == 1
    return ours * geo


SIGN = _calibrate()


def random_embedding(g, rng, shift_primed=False):
    for _ in range(100):
        pts = random_points(g.vertices, rng)
        if shift_primed:
            pts = {v: (p[0] + 1200, p[1], p[2]) if v.endswith("'") else p for v, p in pts.items()}
        try:
            return straight_graph(pts, g.edges), pts
        except DrawingError:
            continue
    raise DrawingError("no generic embedding")


# ---------------------------------------------------------------- Conway-Gordon

def test_standard_k6():
    res = conway_gordon_parity(k6_standard())
    assert sorted(v for _, _, v in res["pairs"]) == [-1] + [0] * 9
    assert res["parity"] == 1 and res["witness"][2] == -1


def test_standard_k6_geometric():
    pts = k6_points_standard()
    res = conway_gordon_parity(k6_standard())
    for a, b, v in res["pairs"]:
        assert v == SIGN * geometric_lk(polygon(pts, a), polygon(pts, b))


def test_single_switch_keeps_parity():
    d = k6_standard()
    for x in d.crossings:
        assert conway_gordon_parity(switch(d, x.id))["parity"] == 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_random_k6_parity_against_geometry(seed):
    d, pts = random_embedding(complete_graph(6), random.Random(seed))
    res = conway_gordon_parity(d)
    assert len(res["pairs"]) == 10
    geo = [geometric_lk(polygon(pts, a), polygon(pts, b)) for a, b, _ in res["pairs"]]
    assert [v for _, _, v in res["pairs"]] == [SIGN * g for g in geo]
    assert sum(geo) % 2 == 1


def test_parity_rejects_other_graphs():
    with pytest.raises(DiagramError, match="not K6"):
        conway_gordon_parity(random_straight(complete_graph(5), random.Random(0)))


# ---------------------------------------------------------------- Petersen family

@pytest.mark.parametrize("i", range(7))
def test_family_member_has_odd_pair(i):
    g = petersen_family()[i]
    d = random_straight(g, random.Random(i))
    a, b, v = odd_linked_pair(d)
    assert v % 2 == 1 and not (a.vertex_set & b.vertex_set)
    assert any({a.edge_set, b.edge_set} == {x.edge_set, y.edge_set} for x, y in disjoint_cycle_pairs(g))


def test_odd_pair_rejects_non_member():
    with pytest.raises(DiagramError, match="not in Petersen family"):
        odd_linked_pair(random_straight(complete_graph(4), random.Random(0)))


# ---------------------------------------------------------------- certificates

def test_example_witnesses():
    w = example_witnesses()
    f, g = certify_theorem_main(w["f"]), certify_theorem_main(w["g"])
    assert isinstance(f, LinkedTriple)
    assert isinstance(g, IrreducibleHandcuff) and g.n != 0 and g.lk == 0
    assert not any(handcuff_survey(w["f"])["handcuff_n"])
    assert handcuff_survey(w["g"])["triples_split"]
    assert verify_certificate(w["f"], f)[0] and verify_certificate(w["g"], g)[0]


def test_certificate_json():
    g = certify_theorem_main(example_witnesses()["g"])
    js = g.to_json()
    assert js["status"] == "IrreducibleHandcuff" and js["n"] == g.n


@pytest.mark.parametrize("seed", range(6))
def test_linked_triple_against_geometry(seed):
    rng = random.Random(seed)
    g = star_connect(complete_graph(6), complete_graph(6), 3, [("1", "1"), ("2", "2"), ("3", "3")])
    d, pts = random_embedding(g, rng, shift_primed=seed % 2 == 0)
    cert = certify_theorem_main(d)
    assert verify_certificate(d, cert)[0]
    if isinstance(cert, LinkedTriple):
        c = cert.cycles
        nonzero = 0
        for i, j, v in cert.linking:
            assert v == SIGN * geometric_lk(polygon(pts, c[i]), polygon(pts, c[j]))
            nonzero += v != 0
        assert nonzero >= 2
        assert len(c[0].vertex_set | c[1].vertex_set | c[2].vertex_set) == sum(len(x.vertices) for x in c)


def test_tampered_certificates_rejected():
    w = example_witnesses()
    f, g = certify_theorem_main(w["f"]), certify_theorem_main(w["g"])
    bad = dataclasses.replace(g, n=g.n + 1)
    assert not verify_certificate(w["g"], bad)[0]
    lk = list(f.linking)
    lk[0] = (lk[0][0], lk[0][1], lk[0][2] + 2)
    assert not verify_certificate(w["f"], dataclasses.replace(f, linking=tuple(lk)))[0]
    assert not verify_certificate(w["f"], dataclasses.replace(f, cycles=(f.cycles[0],) * 3))[0]
    assert not verify_certificate(w["f"], DiagnosticFailure("x", 0))[0]


def test_wrong_graph_rejected():
    g = star_connect(complete_graph(6), complete_graph(6), 4,
                     [("1", "1"), ("2", "2"), ("3", "3"), ("4", "4")])
    d = random_straight(g, random.Random(0))
    with pytest.raises(DiagramError, match="not P\\*3P'"):
        certify_theorem_main(d)
    with pytest.raises(DiagramError):
        certify_theorem_main(k6_standard())


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_every_embedding_certifies(seed, separated):
    d = star_k6(random.Random(seed), separated=separated)
    cert = certify_theorem_main(d)
    assert isinstance(cert, (LinkedTriple, IrreducibleHandcuff))
    assert verify_certificate(d, cert) == (True, "ok")
