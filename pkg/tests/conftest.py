import random

import pytest

from spatialgraph.corpus import (clasp_handcuff, from_pd, knot_table, random_handcuff, standard, star_k6,
                                 tie_handcuff, trivial_handcuff)
from spatialgraph.drawing import build, k6_standard, random_knot, random_straight
from spatialgraph.graphcore import petersen_graph
from spatialgraph.surgery import gen_frs, gen_hrs


def theta_diagram():
    """Three parallel edges between two vertices, one of them crossing another."""
    V = {"A": (0, 0, 0), "B": (10, 0, 0)}
    return build(V, [("p", "A", [(0, 0, 0), (5, 4, 0), (10, 0, 0)], "B"),
                     ("q", "A", [(0, 0, 0), (3, -3, 0), (6, 6, 1), (10, 0, 0)], "B"),
                     ("r", "B", [(10, 0, 0), (5, -6, 0), (0, 0, 0)], "A")])


def star6_diagram():
    """A degree-6 hub with pendant (degree-1) leaves, one edge crossing another."""
    V = {"O": (0, 0, 0)}
    edges = []
    for i in range(6):
        x, y = [(10, 0), (5, 9), (-5, 9), (-10, 0), (-5, -9), (5, -9)][i]
        V[f"L{i}"] = (x, y, 0)
        edges.append((f"s{i}", "O", [(0, 0, 0), (x, y, 0)], f"L{i}"))
    edges.append(("w", "L0", [(10, 0, 0), (12, 5, 2), (2, 6, 2), (5, 9, 0)], "L1"))
    return build(V, edges)


def loop_diagram():
    """A vertex with a self-loop and a pendant edge."""
    V = {"A": (0, 0, 0), "B": (8, 0, 0)}
    return build(V, [("l", "A", [(0, 0, 0), (-4, 3, 0), (-4, -3, 0), (0, 0, 0)], "A"),
                     ("t", "A", [(0, 0, 0), (8, 0, 0)], "B")])


def diagram_corpus():
    rng = random.Random(11)
    out = [standard(n) for n in ("unknot", "trefoil", "figure8", "hopf")]
    out += [from_pd(k["pd"]) for k in knot_table()[::12]]
    out += [k6_standard(), random_straight(petersen_graph(), rng), star_k6(rng)]
    out += [trivial_handcuff().diagram, clasp_handcuff(2).diagram, clasp_handcuff(-1).diagram,
            tie_handcuff(standard("trefoil"), standard("figure8")).diagram,
            random_handcuff(rng).diagram, gen_frs(1, -1).diagram, gen_hrs(2, 1).diagram]
    out += [theta_diagram(), star6_diagram(), loop_diagram()]
    out += [random_knot(7, rng) for _ in range(3)]
    return out


CORPUS = diagram_corpus()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS
