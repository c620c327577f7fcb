import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from spatialgraph.graphcore import (Cycle, GraphFormatError, MultiGraph, complete_graph, cycles,
                                    disjoint_cycle_pairs, has_minor, is_intrinsically_linked_cert,
                                    is_isomorphic, nabla_y, parse_graph, petersen_family,
                                    petersen_graph, serialize_graph, simplify, star_connect, y_nabla)


def handcuff_graph():
    return MultiGraph.from_edges([("g1", "A", "A"), ("e", "A", "B"), ("g2", "B", "B")])


def brute_cycles(g):
    """Edge subsets in which every vertex has degree 2 and which are connected."""
    found = set()
    edges = g.edges
    for r in range(1, len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            deg = Counter()
            for _, u, v in sub:
                deg[u] += 1
                deg[v] += 1
            if any(x != 2 for x in deg.values()):
                continue
            parent = {v: v for v in deg}

            def root(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            for _, u, v in sub:
                parent[root(u)] = root(v)
            if len({root(v) for v in deg}) == 1:
                found.add(frozenset(e for e, _, _ in sub))
    return found


def test_cycle_counts():
    assert len(cycles(complete_graph(3))) == 1
    assert len(cycles(handcuff_graph())) == 2
    assert len(cycles(complete_graph(6))) == 197


@pytest.mark.parametrize("g", [complete_graph(4), complete_graph(5), handcuff_graph(),
                               MultiGraph.from_edges([("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"),
                                                      ("d", "3", "1"), ("l", "3", "3")])])
def test_cycles_match_brute_force(g):
    assert {c.edge_set for c in cycles(g)} == brute_cycles(g)


def test_cycles_are_closed_walks():
    em = complete_graph(5).edge_map
    for c in cycles(complete_graph(5)):
        n = len(c.edges)
        for i, e in enumerate(c.edges):
            assert set(em[e]) == {c.vertices[i], c.vertices[(i + 1) % n]}
        assert len(set(c.vertices)) == n


def test_disjoint_pairs():
    assert len(disjoint_cycle_pairs(handcuff_graph())) == 1
    assert len(disjoint_cycle_pairs(complete_graph(6))) == 10
    assert disjoint_cycle_pairs(complete_graph(4)) == []


def test_nabla_y_round_trip_on_family():
    for g in petersen_family():
        for c in cycles(g):
            if len(c.edges) != 3:
                continue
            h = nabla_y(g, c)
            new = [v for v in h.vertices if v not in g.vertices]
            assert len(new) == 1
            assert is_isomorphic(y_nabla(h, new[0]), g)


def test_nabla_y_counts():
    k6 = complete_graph(6)
    tri = next(c for c in cycles(k6) if len(c.edges) == 3)
    h = nabla_y(k6, tri)
    assert (len(h.vertices), len(h.edges)) == (7, 15)


def test_y_nabla_on_k4_makes_doubled_edges():
    h = y_nabla(complete_graph(4), "1")
    assert len(h.vertices) == 3
    pairs = Counter(frozenset((u, v)) for _, u, v in h.edges)
    assert all(n == 2 for n in pairs.values())


def test_petersen_family():
    fam = petersen_family()
    assert len(fam) == 7
    assert any(is_isomorphic(g, complete_graph(6)) for g in fam)
    assert any(is_isomorphic(g, petersen_graph()) for g in fam)
    assert all(len(g.edges) == 15 for g in fam)


def test_petersen_family_closed_under_exchanges():
    fam = petersen_family()
    for g in fam:
        for c in cycles(g):
            if len(c.edges) == 3:
                h = simplify(nabla_y(g, c))
                assert any(is_isomorphic(h, f) for f in fam)
        for v in g.vertices:
            if g.degree(v) == 3 and len(set(g.neighbors(v))) == 3:
                h = simplify(y_nabla(g, v))
                assert any(is_isomorphic(h, f) for f in fam)


def test_star_connect_sizes():
    k6 = complete_graph(6)
    att = [("1", "1"), ("2", "2"), ("3", "3"), ("4", "4")]
    g4 = star_connect(k6, k6, 4, att)
    g3 = star_connect(k6, k6, 3, att[:3])
    assert (len(g4.vertices), len(g4.edges)) == (12, 34)
    assert (len(g3.vertices), len(g3.edges)) == (12, 33)
    ends = [v for b in g3.bridges for v in g3.edge(b)]
    assert len(set(ends)) == 6


def test_star_connect_rejects_shared_attachment():
    k6 = complete_graph(6)
    with pytest.raises(GraphFormatError):
        star_connect(k6, k6, 3, [("1", "1"), ("1", "2"), ("3", "3")])


def test_minors():
    k5, k6 = complete_graph(5), complete_graph(6)
    assert has_minor(k6, k5)
    assert not has_minor(k5, k6)
    g = star_connect(k6, k6, 3, [("1", "1"), ("2", "2"), ("3", "3")])
    res = has_minor(g, k6)
    assert res.found
    # the model's branch sets are disjoint and each is nonempty
    sets = list(res.model.values())
    assert all(sets) and len(set().union(*sets)) == sum(len(s) for s in sets)


def test_minor_monotone_under_supergraph():
    k6 = complete_graph(6)
    bigger = MultiGraph.from_edges(list(k6.edges) + [("x", "1", "7")])
    assert has_minor(bigger, complete_graph(5))


def test_intrinsic_linking_certificates():
    assert is_intrinsically_linked_cert(complete_graph(6)).status == "CertifiedLinked"
    assert is_intrinsically_linked_cert(complete_graph(5)).status == "NotLinked"
    g = star_connect(complete_graph(6), complete_graph(6), 3, [("1", "1"), ("2", "2"), ("3", "3")])
    assert is_intrinsically_linked_cert(g).status == "CertifiedLinked"


def test_graph_text_round_trip():
    for g in petersen_family() + [handcuff_graph()]:
        h = parse_graph(serialize_graph(g))
        assert h.edges == g.edges and set(h.vertices) == set(g.vertices)


def test_graph_text_errors():
    with pytest.raises(GraphFormatError):
        parse_graph("graph x\nv 1\ne a 1 2\n")
    with pytest.raises(GraphFormatError):
        parse_graph("v 1\n")


@settings(max_examples=25, deadline=None)
@given(st.sets(st.tuples(st.integers(1, 6), st.integers(1, 6)).filter(lambda p: p[0] < p[1]),
               min_size=1, max_size=10))
def test_cycles_match_brute_force_random(pairs):
    g = MultiGraph.from_edges([(f"{u}-{v}", str(u), str(v)) for u, v in sorted(pairs)])
    assert {c.edge_set for c in cycles(g)} == brute_cycles(g)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 6), st.randoms(use_true_random=False))
def test_isomorphism_under_relabeling(which, rnd):
    g = petersen_family()[which]
    names = list(g.vertices)
    rnd.shuffle(names)
    ren = dict(zip(g.vertices, (f"z{n}" for n in names)))
    h = MultiGraph.from_edges([(f"x{e}", ren[u], ren[v]) for e, u, v in g.edges])
    assert is_isomorphic(g, h)
    others = [f for k, f in enumerate(petersen_family()) if k != which]
    assert not any(is_isomorphic(h, f) for f in others)
