from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncstar import corpus
from ncstar.dendrite import (
    arc_in_ncstar_witness,
    branch_cut_family,
    build_approximant,
    clopen_family_check,
    nowhere_compact_witness,
    observation_checks,
    separation_sequences,
    shrinking_basis,
)
from ncstar.errors import BudgetError, DomainError, InputError, InsufficientResolution
from ncstar.metric_graph import Node
from ncstar.oracle import verify_limit
from ncstar.subcontinuum import Subcontinuum, hausdorff_distance, is_noncut

F = Fraction


@pytest.fixture(scope="module")
def T4():
    return build_approximant(3, 4)


def test_stage_counts():
    assert build_approximant(3, 0).graph.classify() == "Arc"
    d1 = build_approximant(3, 1)
    assert (len(d1.graph.ramification_nodes), len(d1.graph.endpoints), d1.component_count()) == (1, 3, 4)
    d2 = build_approximant(3, 2)
    assert (len(d2.graph.ramification_nodes), len(d2.graph.endpoints), d2.component_count()) == (4, 6, 13)


def test_component_count_grows_with_depth():
    counts = [build_approximant(3, d).component_count() for d in range(5)]
    assert all(a < b for a, b in zip(counts, counts[1:]))


def test_higher_branching():
    T = build_approximant(5, 2)
    assert {T.graph.order(Node(v)) for v in T.graph.ramification_nodes} == {5}


def test_budget_and_input_guards():
    with pytest.raises(BudgetError):
        build_approximant(3, 20)
    with pytest.raises(InputError):
        build_approximant(2, 1)


@given(d=st.integers(0, 3), j=st.integers(0, 64))
def test_nesting_is_isometric_and_keeps_ramification(d, j):
    small, big = build_approximant(3, d), build_approximant(3, d + 1)
    x = F(j, 64)
    p, q = small.ab_point(x), small.ab_point(F(64 - j, 64))
    P, Q = big.embed(p, d), big.embed(q, d)
    assert big.ab_position(P) == x
    assert big.graph.distance(P, Q) == small.graph.distance(p, q)
    for v in small.graph.ramification_nodes:
        assert big.graph.order(Node(v)) >= 3


def test_mesh_halves(T4):
    assert [build_approximant(3, d).mesh() for d in (1, 2, 3, 4)] == [F(1, 2), F(1, 4), F(1, 8), F(1, 16)]


def test_family_preconditions():
    T = build_approximant(3, 2)
    with pytest.raises(InputError):
        branch_cut_family(T, T.ab_point(F(3, 4)), T.ab_point(F(1, 4)))
    with pytest.raises(InputError):
        branch_cut_family(T, T.ab_point(F(1, 8)), T.ab_point(F(1, 2)))


def test_clopen_on_second_stage():
    T = build_approximant(3, 2)
    family = branch_cut_family(T, T.ab_point(F(1, 4)), T.ab_point(F(3, 4)))
    report = clopen_family_check(T, family, 4)
    assert report.verdict == "clopen"
    assert report.vietoris_agrees and report.gap > 0
    assert "zero-dimensionality" in report.proxy


@given(lo=st.integers(1, 14), width=st.integers(1, 14))
def test_observations_hold(lo, width):
    T = build_approximant(3, 4)
    hi = min(lo + width, 15)
    if hi <= lo:
        return
    family = branch_cut_family(T, T.ab_point(F(lo, 16)), T.ab_point(F(hi, 16)))
    obs = observation_checks(family, 6)
    assert obs.monotone and obs.exclusions


def test_basis_ordinary_point():
    T = build_approximant(3, 3)
    report = shrinking_basis(T, T.ab_point(F(5, 16)), 8, F(1, 4))
    assert report.case == "ordinary"
    assert report.nonincreasing and report.reached is not None
    assert all(level.contains_Y for level in report.levels)


def test_basis_ramification_point(T4):
    report = shrinking_basis(T4, T4.ab_point(F(3, 8)), 8, F(1, 4))
    assert report.case == "ramification"
    assert report.nonincreasing and report.reached is not None


def test_basis_single_level(T4):
    report = shrinking_basis(T4, T4.ab_point(F(11, 32)), 1)
    assert len(report.levels) == 1 and report.levels[0].contains_Y


def test_basis_rejects_endpoints(T4):
    with pytest.raises(DomainError):
        shrinking_basis(T4, T4.a, 3)


@pytest.mark.parametrize("case,kind", [(1, "dendrite-endpoint"), (2, "dendrite-branch"), (3, "dendrite-whole")])
def test_nowhere_compact_witnesses(T4, case, kind):
    w = nowhere_compact_witness(T4, case, F(1, 4), 4)
    assert w.case == kind
    assert w.verified(T4.graph)
    assert not is_noncut(T4.graph, w.limit)
    assert "nowhere-compactness" in w.proxy


def test_endpoint_witness_limit_is_near_a(T4):
    w = nowhere_compact_witness(T4, 1, F(1, 4), 4)
    G = T4.graph
    Y = Subcontinuum.point(G, T4.a)
    assert all(hausdorff_distance(G, S, Y) < F(1, 4) for S in w.members)


def test_whole_space_witness_stays_near_X(T4):
    w = nowhere_compact_witness(T4, 3, F(1, 4), 4)
    X = Subcontinuum.whole(T4.graph)
    assert all(hausdorff_distance(T4.graph, S, X) < F(1, 4) for S in w.members)


def test_shallow_depth_reports_requirement():
    with pytest.raises(InsufficientResolution) as info:
        nowhere_compact_witness(build_approximant(3, 2), 1, F(1, 64), 3)
    assert info.value.required > 2


def test_arc_witness_examples(T4):
    A = corpus.arc()
    w = arc_in_ncstar_witness(A)
    assert w.members[0] == Subcontinuum(A, {"e": [(0, F(1, 4))]})
    T = corpus.triod()
    w = arc_in_ncstar_witness(T, "leg1")
    assert all(S.contains(Node("e1")) and S.issubset(Subcontinuum(T, {"leg1": [(0, 1)]})) for S in w.members)
    w = arc_in_ncstar_witness(T4.graph)
    assert len(w.members) == 32 and w.injective and w.max_gap <= F(1, 16)
    assert all(is_noncut(T4.graph, S) for S in w.members)


def test_separation_sequences_limits():
    T = build_approximant(3, 2)
    G = T.graph
    p, q = T.a, T.ab_point(F(1, 2))
    near, far = separation_sequences(G, p, q, 6)
    up, down = verify_limit(G, near), verify_limit(G, far)
    assert up.nested == "increasing" and down.nested == "decreasing"
    assert up.limit == remove_side(G, q, p)
    assert down.limit == remove_side(G, q, p, keep_far=True)


def remove_side(G, q, p, keep_far=False):
    """Closure of the ``p``-side of ``X minus {q}``, or the complement of that side."""
    from ncstar.subcontinuum import complement_components

    for region in complement_components(G, Subcontinuum.point(G, q)):
        if region.contains(p):
            closed = region.to_pointset().closure().to_subcontinuum()
            if not keep_far:
                return closed
            return region.to_pointset().complement().to_subcontinuum()
