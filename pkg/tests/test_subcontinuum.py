from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GRAPHS, TREES, ball, graph, subcontinua
from ncstar import corpus
from ncstar.errors import DomainError, InputError
from ncstar.metric_graph import Interior, Node
from ncstar.oracle import enumerate_grid_subcontinua
from ncstar.subcontinuum import (
    PointSet,
    Subcontinuum,
    boundary,
    complement_components,
    convex_hull,
    geodesic_segment,
    hausdorff_distance,
    is_noncut,
    pointset_components,
    remove_component,
)

F = Fraction
half = F(1, 2)


def sc(G, **traces):
    return Subcontinuum(G, {e: [tuple(map(F, iv)) for iv in ivs] for e, ivs in traces.items()})


def brute_hausdorff(G, S1, S2, denominator=16):
    """Max-min over a uniform grid of edge offsets (exact when breakpoints sit on the grid)."""
    def grid(S):
        pts = [Node(v) for v in S.nodes]
        for e in G.edges:
            pts += [Interior(e.id, F(j, denominator)) for j in range(1, denominator)
                    if S.contains(Interior(e.id, F(j, denominator)))]
        for eid, ivs in S.traces.items():
            pts += [G.point(eid, x) for iv in ivs for x in iv]
        return pts

    A, B = grid(S1), grid(S2)
    one = max(min(G.distance(p, q) for q in B) for p in A)
    two = max(min(G.distance(p, q) for q in A) for p in B)
    return max(one, two)


def test_connectedness_examples():
    A, T = corpus.arc(), corpus.triod()
    assert sc(A, e=[(0, half)])
    with pytest.raises(InputError):
        sc(A, e=[(0, F(1, 4)), (half, 1)])
    assert sc(T, leg1=[(0, 1)], leg2=[(0, 1)]).measure() == 2


def test_complement_component_examples():
    T, A, C = corpus.triod(), corpus.arc(), corpus.circle()
    assert len(complement_components(T, Subcontinuum.point(T, Node("r")))) == 3
    assert len(complement_components(A, sc(A, e=[(F(1, 4), half)]))) == 2
    assert len(complement_components(C, sc(C, c=[(F(1, 4), half)]))) == 1
    assert complement_components(T, Subcontinuum.whole(T)) == []


def test_noncut_examples():
    T = corpus.triod()
    assert not is_noncut(T, Subcontinuum.point(T, Node("r")))
    assert is_noncut(T, Subcontinuum.point(T, Node("e1")))
    assert is_noncut(T, sc(T, leg1=[(half, 1)]))
    assert is_noncut(T, Subcontinuum.whole(T))


def test_boundary_examples():
    T, A = corpus.triod(), corpus.arc()
    assert boundary(T, sc(T, leg1=[(half, 1)])) == {Interior("leg1", half)}
    assert boundary(T, Subcontinuum.whole(T)) == set()
    assert boundary(A, sc(A, e=[(F(1, 4), half)])) == {Interior("e", F(1, 4)), Interior("e", half)}


def test_convex_hull_examples():
    T = corpus.triod()
    assert convex_hull(T, [Node("e1"), Node("e2")]) == sc(T, leg1=[(0, 1)], leg2=[(0, 1)])
    assert convex_hull(T, [Node("e1"), Node("e2"), Node("e3")]).is_whole
    assert convex_hull(T, [Node("r")]) == Subcontinuum.point(T, Node("r"))
    with pytest.raises(DomainError):
        convex_hull(corpus.circle(), [Node("v0")])


def test_hausdorff_examples():
    A, T = corpus.arc(), corpus.triod()
    assert hausdorff_distance(A, sc(A, e=[(0, F(1, 4))]), sc(A, e=[(0, half)])) == F(1, 4)
    assert hausdorff_distance(T, Subcontinuum.point(T, Node("e1")), Subcontinuum.point(T, Node("e2"))) == 2
    leg = sc(T, leg1=[(0, 1)])
    assert hausdorff_distance(T, leg, Subcontinuum.whole(T)) == 1
    assert brute_hausdorff(T, leg, Subcontinuum.whole(T)) == 1


def test_remove_component():
    T, A = corpus.triod(), corpus.arc()
    assert remove_component(T, Node("r"), Node("e1")) == sc(T, leg2=[(0, 1)], leg3=[(0, 1)])
    assert remove_component(T, Interior("leg1", half), Node("e1")) == sc(T, leg1=[(0, half)], leg2=[(0, 1)], leg3=[(0, 1)])
    assert remove_component(A, Interior("e", half), Node("v1")) == sc(A, e=[(0, half)])


def test_geodesic_segment_on_loop_takes_short_way():
    L = corpus.lollipop()
    seg = geodesic_segment(L, Node("v"), L.point("loop", F(3, 4)))
    assert seg.measure() == 1


def test_pointset_algebra():
    A = corpus.arc()
    S = sc(A, e=[(F(1, 4), F(3, 4))]).to_pointset()
    hole = PointSet.of_points(A, [Interior("e", half)])
    parts = pointset_components(S - hole)
    assert len(parts) == 2
    assert (S - hole).closure() == S
    assert S.complement().complement() == S


@pytest.mark.parametrize("name", ["arc", "triod", "h_tree", "theta"])
@settings(max_examples=25)
@given(data=st.data())
def test_hausdorff_matches_grid_brute_force(name, data):
    G = graph(name)
    S1, S2 = data.draw(subcontinua(G, 4)), data.draw(subcontinua(G, 4))
    assert hausdorff_distance(G, S1, S2) == brute_hausdorff(G, S1, S2)


@pytest.mark.parametrize("name", GRAPHS)
@given(data=st.data())
def test_hausdorff_metric_axioms(name, data):
    G = graph(name)
    X, Y, Z = (data.draw(subcontinua(G)) for _ in range(3))
    assert hausdorff_distance(G, X, X) == 0
    assert hausdorff_distance(G, X, Y) == hausdorff_distance(G, Y, X)
    assert (hausdorff_distance(G, X, Y) == 0) == (X == Y)
    assert hausdorff_distance(G, X, Z) <= hausdorff_distance(G, X, Y) + hausdorff_distance(G, Y, Z)


@pytest.mark.parametrize("name", GRAPHS)
@given(data=st.data())
def test_complement_components_partition(name, data):
    G = graph(name)
    S = data.draw(subcontinua(G))
    regions = complement_components(G, S)
    union = PointSet.empty(G)
    for R in regions:
        ps = R.to_pointset()
        assert not ps.intersects(union)
        union = union | ps
    assert union == S.to_pointset().complement()
    assert is_noncut(G, S) == (len(regions) <= 1)


@pytest.mark.parametrize("name", TREES)
@given(data=st.data())
def test_single_boundary_point_for_tree_members(name, data):
    T = graph(name)
    S = data.draw(subcontinua(T))
    if is_noncut(T, S) and not S.is_whole:
        assert len(boundary(T, S)) == 1


@pytest.mark.parametrize("name", GRAPHS)
@given(data=st.data(), k=st.integers(1, 3))
def test_complement_count_invariant_under_subdivision(name, data, k):
    G = graph(name)
    S = data.draw(subcontinua(G))
    sub = G.subdivide(k)
    fine = {}
    for eid, ivs in S.traces.items():
        for a, b in ivs:
            for j in range(k):
                lo, hi = max(a * k - j, 0), min(b * k - j, 1)
                if lo <= hi:
                    fine.setdefault(sub.fine_edge(eid, j), []).append((lo, hi))
    S_fine = Subcontinuum(sub.fine, fine)
    assert len(complement_components(sub.fine, S_fine)) == len(complement_components(G, S))


@pytest.mark.parametrize("name", ["arc", "circle", "triod", "lollipop", "theta"])
def test_grid_flags_agree_with_noncut(name):
    G = graph(name)
    sample = enumerate_grid_subcontinua(G, 2)
    for i in range(sample.count):
        assert sample.member_flags[i] == is_noncut(G, sample.subcontinuum(i))


def test_ball_helper_is_the_metric_ball():
    T = corpus.triod()
    B = ball(T, Interior("leg1", half), 1)
    assert B == sc(T, leg1=[(0, 1)], leg2=[(0, half)], leg3=[(0, half)])
