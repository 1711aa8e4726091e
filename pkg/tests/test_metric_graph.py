from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GRAPHS, graph, points
from ncstar import corpus
from ncstar.errors import InputError
from ncstar.metric_graph import Interior, MetricGraph, Node, rational, render


def test_order_examples():
    T = corpus.triod()
    assert T.order(Node("r")) == 3
    assert T.order(Interior("leg1", Fraction(1, 2))) == 2
    assert corpus.lollipop().order(Node("v")) == 3


def test_classify_examples():
    assert corpus.arc().classify() == "Arc"
    assert corpus.circle().classify() == "Circle"
    assert corpus.triod().classify() == "Tree"
    assert corpus.split_arc().classify() == "Arc"
    assert corpus.split_circle().classify() == "Circle"
    assert corpus.theta().classify() == "GeneralGraph"
    assert corpus.lollipop().classify() == "GeneralGraph"


def test_distance_examples():
    T = corpus.triod()
    assert T.distance(Node("e1"), Node("e2")) == 2
    A = corpus.arc()
    assert A.distance(A.point("e", Fraction(1, 4)), A.point("e", Fraction(3, 4))) == Fraction(1, 2)
    L = corpus.lollipop()
    # offsets 0 and 3 along a loop of length 4: the short way round is 1
    assert L.distance(Node("v"), L.point("loop", Fraction(3, 4))) == 1


def test_subdivide_examples():
    fine = corpus.arc().subdivide(4).fine
    assert (len(fine.nodes), len(fine.edges)) == (5, 4)
    assert {e.length for e in fine.edges} == {Fraction(1, 4)}
    fine = corpus.triod().subdivide(2).fine
    assert (len(fine.nodes), len(fine.edges)) == (7, 6)
    fine = corpus.circle().subdivide(4).fine
    assert (len(fine.nodes), len(fine.edges)) == (4, 4)
    assert fine.classify() == "Circle"


def test_rational_rendering_round_trip():
    assert render(rational("6/8")) == "3/4"
    assert render(rational(2)) == "2"
    assert rational("0.25") == Fraction(1, 4)


def test_json_round_trip():
    for name in GRAPHS:
        G = graph(name)
        assert MetricGraph.from_dict(G.to_dict()) == G


@pytest.mark.parametrize("doc", [
    {"nodes": ["a"], "edges": [{"id": "e", "from": "a", "to": "b", "length": "1"}]},
    {"nodes": ["a", "b"], "edges": [{"id": "e", "from": "a", "to": "b", "length": "-1"}]},
    {"nodes": ["a", "b"], "edges": []},
    {"nodes": ["a", "b", "c"], "edges": [{"id": "e", "from": "a", "to": "b", "length": "1"}]},
])
def test_malformed_graphs_rejected(doc):
    with pytest.raises(InputError):
        MetricGraph.from_dict(doc)


def test_hairs_and_loops():
    assert len(corpus.triod().hairs()) == 3
    assert len(corpus.h_tree().internal_chains()) == 1
    assert len(corpus.lollipop().loops()) == 1
    assert corpus.theta().hairs() == [] and corpus.theta().loops() == []


@pytest.mark.parametrize("name", GRAPHS)
@given(data=st.data())
def test_distance_is_a_metric(name, data):
    G = graph(name)
    p, q, r = (data.draw(points(G)) for _ in range(3))
    assert G.distance(p, p) == 0
    assert G.distance(p, q) == G.distance(q, p)
    assert (G.distance(p, q) == 0) == (p == q)
    assert G.distance(p, r) <= G.distance(p, q) + G.distance(q, r)


@pytest.mark.parametrize("name", GRAPHS)
@given(data=st.data(), k=st.integers(1, 4))
def test_subdivision_is_isometric(name, data, k):
    G = graph(name)
    sub = G.subdivide(k)
    p, q = data.draw(points(G)), data.draw(points(G))
    assert sub.fine.distance(sub.to_fine(p), sub.to_fine(q)) == G.distance(p, q)
    assert sub.to_coarse(sub.to_fine(p)) == p
    assert sub.fine.order(sub.to_fine(p)) == G.order(p)
    assert sub.fine.classify() == G.classify()
