from fractions import Fraction
from itertools import combinations

import pytest

from conftest import graph
from ncstar import corpus
from ncstar.errors import BudgetError, InputError
from ncstar.metric_graph import Interior, Node
from ncstar.oracle import (
    cluster_components,
    element_budget,
    enumerate_grid_subcontinua,
    sample_ncstar,
    verify_limit,
)
from ncstar.subcontinuum import Subcontinuum, hausdorff_distance, is_noncut

F = Fraction


def test_arc_counts():
    sample = enumerate_grid_subcontinua(corpus.arc(), 4)
    # closed intervals [i/4, j/4] with i <= j
    assert sample.count == len(list(combinations(range(5), 2))) + 5 == 15
    assert sample.member_count() == 9
    assert sample_ncstar(corpus.arc(), 4).count == 9


def test_cycle_count_matches_closed_form():
    # on an n-node cycle: n points, n(n-1) proper arcs, and the whole circle
    for n in (3, 4, 5):
        sample = enumerate_grid_subcontinua(corpus.circle(), n)
        assert sample.count == n + n * (n - 1) + 1
        assert sample.member_count() == sample.count


def test_triod_single_segment_count():
    # 4 node points, 3 single legs, 3 pairs of legs, the whole triod
    assert enumerate_grid_subcontinua(corpus.triod(), 1).count == 11


def test_triod_members_at_k2_by_kind():
    T = corpus.triod()
    members = sample_ncstar(T, 2).members().subcontinua()
    points = [S for S in members if S.single_point is not None]
    assert {str(S.single_point) for S in points} == {"e1", "e2", "e3"}
    assert sum(S.is_whole for S in members) == 1
    assert len(members) == 13


@pytest.mark.parametrize("name", ["arc", "circle", "triod", "h_tree", "lollipop", "theta", "figure_eight", "k4"])
def test_bond_search_equals_filter(name):
    G = graph(name)
    k = 2 if name in ("k4", "figure_eight") else 3
    fast = sample_ncstar(G, k, method="bonds")
    slow = sample_ncstar(G, k, method="filter")
    assert fast.elements == slow.elements


@pytest.mark.parametrize("name", ["triod", "lollipop", "theta"])
def test_filter_soundness(name):
    G = graph(name)
    sample = enumerate_grid_subcontinua(G, 3)
    for i in range(sample.count):
        S = sample.subcontinuum(i)
        assert sample.member_flags[i] == is_noncut(G, S)
        assert sample.index_of(S) == i


@pytest.mark.parametrize("name", ["triod", "lollipop"])
def test_grid_hausdorff_matches_exact(name):
    G = graph(name)
    sample = enumerate_grid_subcontinua(G, 2)
    items = sample.subcontinua()
    for i in range(0, sample.count, 3):
        for j in range(0, sample.count, 5):
            assert sample.hausdorff(i, j) == hausdorff_distance(G, items[i], items[j])


@pytest.mark.parametrize("name,k,eps,expected", [
    ("arc", 4, F(3, 10), 1),
    ("triod", 8, F(1, 4), 4),
    ("h_tree", 8, F(1, 4), 7),
])
def test_cluster_examples(name, k, eps, expected):
    report = cluster_components(sample_ncstar(graph(name), k), eps)
    assert report.count == expected
    assert report.adequate


def test_inadequate_eps_is_reported():
    report = cluster_components(sample_ncstar(corpus.triod(), 8), F(1, 16))
    assert not report.adequate


def test_circle_members_are_all_elements():
    for k in (4, 8):
        sample = enumerate_grid_subcontinua(corpus.circle(), k)
        assert sample.member_count() == sample.count


def test_budget_guard(monkeypatch):
    with pytest.raises(BudgetError):
        enumerate_grid_subcontinua(corpus.k4(), 4, budget=100)
    monkeypatch.setenv("HYP_BUDGET", "123")
    assert element_budget() == 123


def test_bad_resolution():
    with pytest.raises(InputError):
        sample_ncstar(corpus.arc(), 0)


def test_limit_of_hair_sequence():
    T = corpus.triod()
    # [e1, r_n] with r_n approaching the center
    seq = [Subcontinuum(T, {"leg1": [(F(1, 2 ** n), 1)]}) for n in range(1, 7)]
    report = verify_limit(T, seq)
    assert report.cauchy and report.nested == "increasing"
    assert report.limit == Subcontinuum(T, {"leg1": [(0, 1)]})
    assert report.member is False
    assert all(b <= a for a, b in zip(report.distances, report.distances[1:]))


def test_limit_of_constant_sequence():
    T = corpus.triod()
    A = Subcontinuum.point(T, Node("e2"))
    report = verify_limit(T, [A, A, A])
    assert report.cauchy and report.limit == A and report.member


def test_unrecognized_sequence_gives_no_limit():
    A = corpus.arc()
    seq = [Subcontinuum.point(A, Interior("e", t)) for t in (F(1, 2), F(1, 4), F(3, 4), F(1, 8))]
    report = verify_limit(A, seq)
    assert not report.cauchy and report.limit is None
