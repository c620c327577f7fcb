import random

import pytest

from spatialgraph.corpus import clasp_handcuff, random_handcuff, standard, tie_handcuff, trivial_handcuff
from spatialgraph.diagram import HandcuffDiagram, components, underlying_graph, validate
from spatialgraph.drawing import build
from spatialgraph.graphcore import disjoint_cycle_pairs
from spatialgraph.invariants import a2, linking_number, n_invariant
from spatialgraph.surgery import KNOT_LABEL, band_twist, d_sum, gen_frs, gen_hrs


def handcuff_with_passage():
    """The joining edge dips under loop2 once before reaching its vertex from inside."""
    V = {"A": (0, 0, 0), "B": (10, 0, 0)}
    d = build(V, [("g1", "A", [(0, 0, 0), (-3, 3, 0), (-6, 0, 0), (-3, -3, 0), (0, 0, 0)], "A"),
                  ("e", "A", [(0, 0, 0), (5, 5, -1), (14, 5, -1), (14, 0, -1), (10, 0, 0)], "B"),
                  ("g2", "B", [(10, 0, 0), (12, 3, 0), (16, 0, 0), (12, -3, 0), (10, 0, 0)], "B")],
              roles={"loop1": "g1", "loop2": "g2", "edge": "e"})
    return HandcuffDiagram.from_diagram(d)


FIXTURES = [trivial_handcuff(), clasp_handcuff(1), clasp_handcuff(-2), handcuff_with_passage(),
            tie_handcuff(standard("trefoil")), gen_frs(1, 1), gen_frs(-2, 1)] + \
    [random_handcuff(random.Random(s)) for s in range(5)]


@pytest.mark.parametrize("h", FIXTURES, ids=range(len(FIXTURES)))
def test_dsum_is_one_valid_knot(h):
    rec = d_sum(h)
    assert validate(rec.knot) == []
    assert len(components(rec.knot)) == 1
    assert set(rec.knot.label.values()) == {KNOT_LABEL}


def test_trivial_dsum_is_crossing_free():
    rec = d_sum(trivial_handcuff())
    assert len(rec.knot.crossings) == 0


def test_passage_doubles():
    h = handcuff_with_passage()
    assert len(h.diagram.crossings) == 1
    rec = d_sum(h)
    cid = h.diagram.crossings[0].id
    from_passage = [k for k, v in rec.origin if v == cid]
    assert len(from_passage) == 2
    assert n_invariant(h).n_value == 0


def test_frs_band_sum():
    rec = d_sum(gen_frs(1, 1))
    assert a2(rec.knot) == 2


def test_band_twist():
    rec = d_sum(trivial_handcuff())
    assert band_twist(rec, 0).knot == rec.knot
    for k in (-1, 1):
        assert a2(band_twist(rec, k).knot) == 0


@pytest.mark.parametrize("h", FIXTURES, ids=range(len(FIXTURES)))
def test_band_twist_independence(h):
    base = n_invariant(h)
    for k in (-2, -1, 1, 2):
        inv = n_invariant(h, twist=k)
        assert inv.reduced == base.reduced
        if base.modulus == 0:
            assert inv.n_value == base.n_value


@pytest.mark.parametrize("lk", [1, 2, 3, -2])
def test_full_twist_shifts_raw_n_by_lk(lk):
    h = clasp_handcuff(lk)
    n0 = n_invariant(h).n_value
    for k in (-2, -1, 1, 2):
        assert n_invariant(h, twist=k).n_value - n0 == k * lk


@pytest.mark.parametrize("r,s,n", [(0, 5, 0), (1, 1, 2), (-2, 3, -12), (3, -1, -6)])
def test_gen_frs(r, s, n):
    f = gen_frs(r, s)
    assert n_invariant(f).n_value == n
    assert linking_number(f.diagram, f.loop1, f.loop2) == 0


def test_gen_hrs_linking():
    p = gen_hrs(2, 3)
    d = p.diagram
    assert linking_number(d, p.cycle(1), p.cycle(3)) == 3
    assert linking_number(d, p.cycle(2), p.cycle(4)) == 2
    assert linking_number(d, p.cycle(1), p.cycle(4)) == 0


def test_gen_hrs_sub_handcuffs():
    from spatialgraph.invariants import handcuff_of
    p = gen_hrs(-2, 3)
    values = {(i, j): n_invariant(handcuff_of(p, i, j)).n_value for i, j in ((1, 3), (1, 4), (2, 3), (2, 4))}
    assert values == {(1, 3): 0, (1, 4): 0, (2, 3): 0, (2, 4): -12}


def test_untwisted_generator_is_unlinked():
    p = gen_hrs(0, 0)
    g = underlying_graph(p.diagram)
    assert len(p.diagram.crossings) == 0
    assert all(linking_number(p.diagram, a, b) == 0 for a, b in disjoint_cycle_pairs(g))
