import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from spatialgraph.corpus import clasp_handcuff, from_pd, standard, tie_handcuff, trivial_handcuff
from spatialgraph.diagram import DiagramError, mirror, reverse, smooth_crossing, switch
from spatialgraph.drawing import build, random_knot
from spatialgraph.invariants import (ConwayPoly, IrreducibleCertified, SkeinBudgetExceeded, Unknown, a2,
                                     a2_gauss, conway, irreducibility_certificate, linking_number,
                                     n_invariant, xi)
from spatialgraph.moves import find_sites, insert_twists
from spatialgraph.surgery import gen_frs, gen_hrs

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "knots_le9.json").read_text())


def coeffs(k):
    c = {int(p): v for p, v in k["conway"].items()}
    return [c.get(i, 0) for i in range(max(c) + 1)]


def pd_connected_sum(pd1, pd2):
    """PD code of K1 # K2: the last arc of each summand is rerouted into the other."""
    n1, n2 = 2 * len(pd1), 2 * len(pd2)
    n = n1 + n2

    def incoming(x, arc, nxt):
        a, b, c, d = x
        return a == arc or (b == arc and d == nxt) or (d == arc and b == nxt)

    def reroute(pd, arc, nxt, new):
        out, done = [], False
        for x in pd:
            x = list(x)
            if not done and incoming(x, arc, nxt):
                if x[0] == arc:
                    x[0] = new
                else:
                    x[x.index(arc, 1)] = new
                done = True
            out.append(x)
        return out

    p1 = reroute([list(x) for x in pd1], n1, 1, n)
    p2 = reroute([[a + n1 for a in x] for x in pd2], n, n1 + 1, n1)
    return p1 + p2


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def split_circles():
    return build({}, [("a", None, [(0, 0, 0), (4, 0, 0), (4, 4, 0), (0, 4, 0), (0, 0, 0)], None),
                      ("b", None, [(10, 0, 0), (14, 0, 0), (14, 4, 0), (10, 4, 0), (10, 0, 0)], None)])


# ---------------------------------------------------------------- linking number

def test_lk_basic():
    assert linking_number(split_circles(), "a", "b") == 0
    assert linking_number(standard("hopf"), "a", "b") == 1
    assert linking_number(mirror(standard("hopf")), "a", "b") == -1


@pytest.mark.parametrize("k", [-3, -1, 1, 2])
def test_lk_of_twist_link(k):
    # a split pair drawn with one bigon: b passes over a twice
    d = build({}, [("a", None, [(0, 0, 0), (10, 0, 0), (10, 3, 0), (0, 3, 0), (0, 0, 0)], None),
                   ("b", None, [(2, 2, 1), (8, 2, 1), (8, 6, 1), (2, 6, 1), (2, 2, 1)], None)])
    assert linking_number(d, "a", "b") == 0
    sites = [s for s in find_sites(d, "twist")
             if {d.label[s.darts[0][0]], d.label[s.darts[1][0]]} == {"a", "b"}]
    assert sites
    for site in sites:
        t = insert_twists(d, site, k)
        assert linking_number(t, "a", "b") == k
        assert sum(x.sign for x in t.crossings) == 2 * k


def test_lk_symmetry_and_reversal():
    h = clasp_handcuff(3)
    d, a, b = h.diagram, h.loop1, h.loop2
    assert linking_number(d, a, b) == linking_number(d, b, a) == 3
    assert linking_number(reverse(d, a), a, b) == -3


def test_lk_rejects_shared_edges():
    with pytest.raises(DiagramError):
        linking_number(standard("hopf"), "a", "a")


# ---------------------------------------------------------------- Conway polynomial

def test_conway_standard():
    assert conway(standard("unknot")).coeffs == (1,)
    assert conway(standard("hopf")).coeffs == (0, 1)
    assert conway(standard("trefoil")).coeffs == (1, 0, 1)
    assert conway(standard("figure8")).coeffs == (1, 0, -1)
    assert str(ConwayPoly((1, 0, -1))) == "1-z^2"


def test_conway_matches_knotinfo():
    for k in FIXTURE:
        got = list(conway(from_pd(k["pd"])).coeffs)
        assert got == coeffs(k), k["name"]


def test_split_link_conway_zero():
    assert conway(split_circles()).coeffs in ((), (0,))


def test_budget():
    with pytest.raises(SkeinBudgetExceeded):
        conway(from_pd(FIXTURE[-1]["pd"]), budget=2)


# ---------------------------------------------------------------- a2

def test_a2_values():
    assert a2(standard("unknot")) == 0
    assert a2(standard("trefoil")) == a2(mirror(standard("trefoil"))) == 1
    assert a2(standard("figure8")) == -1


def test_a2_requires_knot():
    with pytest.raises(DiagramError):
        a2(standard("hopf"))


@pytest.mark.parametrize("k", FIXTURE, ids=[k["name"] for k in FIXTURE])
def test_a2_algorithms_agree_on_table(k):
    d = from_pd(k["pd"])
    want = k["conway"].get("2", 0)
    assert a2(d) == a2_gauss(d) == want


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 9), st.randoms(use_true_random=False))
def test_a2_algorithms_agree_on_random_polygons(n, rnd):
    d = random_knot(n, random.Random(rnd.random()))
    assert a2(d) == a2_gauss(d)


@pytest.mark.parametrize("seed", range(6))
def test_connected_sum_additivity(seed):
    rng = random.Random(seed)
    k1, k2 = rng.sample(FIXTURE[:40], 2)
    s = from_pd(pd_connected_sum(k1["pd"], k2["pd"]))
    assert a2(s) == a2(from_pd(k1["pd"])) + a2(from_pd(k2["pd"]))
    assert list(conway(s).coeffs) == poly_mul(coeffs(k1), coeffs(k2))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(range(len(FIXTURE))), st.data())
def test_skein_identity(i, data):
    d = from_pd(FIXTURE[i]["pd"])
    x = data.draw(st.sampled_from(d.crossings))
    kp, km = (d, switch(d, x.id)) if x.sign > 0 else (switch(d, x.id), d)
    assert a2(kp) - a2(km) == linking_number(smooth_crossing(d, x.id), "c1", "c2")


# ---------------------------------------------------------------- handcuff invariants

def test_n_values():
    inv = n_invariant(trivial_handcuff())
    assert (inv.n_value, inv.modulus) == (0, 0)
    assert n_invariant(gen_frs(1, 1)).n_value == 2
    assert n_invariant(gen_frs(2, -3)).n_value == -12
    assert n_invariant(tie_handcuff(standard("trefoil"))).n_value == 0


@pytest.mark.parametrize("k", [-2, 2, 3])
def test_n_reduced_range(k):
    inv = n_invariant(clasp_handcuff(k))
    assert inv.modulus == abs(k)
    assert 0 <= inv.reduced < inv.modulus
    assert (inv.n_value - inv.reduced) % inv.modulus == 0


def test_xi_values():
    assert xi(gen_hrs(0, 0)) == 0
    assert xi(gen_hrs(2, 3)) == 12
    assert xi(gen_hrs(0, -2)) == 0
    assert xi(gen_hrs(-1, 2)) == -4


def test_irreducibility_certificates():
    assert isinstance(irreducibility_certificate(gen_frs(1, 1)), IrreducibleCertified)
    assert isinstance(irreducibility_certificate(trivial_handcuff()), Unknown)
    cert = irreducibility_certificate(tie_handcuff(standard("trefoil")))
    assert isinstance(cert, Unknown) and cert.invariant.n_value == 0


def test_pd_connected_sum_helper_is_valid():
    pd = FIXTURE[0]["pd"]
    s = from_pd(pd_connected_sum(pd, pd))
    assert len(s.crossings) == 2 * len(FIXTURE[0]["pd"])
