"""Finite approximants of a dendrite whose endpoints are dense.

Everything printed here is a finite-scale stand-in for a statement about the
limit dendrite; each report says which one.

Run with ``python3 notebooks/03_dendrite.py``.
"""
from fractions import Fraction

from ncstar.dendrite import (
    arc_in_ncstar_witness,
    branch_cut_family,
    build_approximant,
    clopen_family_check,
    nowhere_compact_witness,
    shrinking_basis,
)

# %% Growth of the approximants.
for d in range(5):
    T = build_approximant(3, d)
    print(f"depth {d}: {len(T.graph.edges):3d} edges, {len(T.graph.ramification_nodes):3d} ramification points, "
          f"mesh {T.mesh()}, components {T.component_count()}")

# %% A branch-cut family is isolated from the other grid members.
T2 = build_approximant(3, 2)
family = branch_cut_family(T2, T2.ab_point(Fraction(1, 4)), T2.ab_point(Fraction(3, 4)))
print(clopen_family_check(T2, family, 4).to_dict())

# %% Families around B_p shrink as the cut points close in.
T4 = build_approximant(3, 4)
for x in (Fraction(11, 32), Fraction(3, 8)):
    report = shrinking_basis(T4, T4.ab_point(x), 8, Fraction(1, 8))
    print(report.case, [(lv.n, str(lv.diameter)) for lv in report.levels], "reached", report.reached)

# %% Near every kind of member there are members converging to a non-member.
for case in (1, 2, 3):
    w = nowhere_compact_witness(T4, case, Fraction(1, 4), 4)
    print(w.case, "limit", w.limit, "distances", [str(d) for d in w.distances])

# %% At any finite depth the hyperspace still contains arcs.
arc = arc_in_ncstar_witness(T4.graph)
print(len(arc.members), "members along", arc.edge, "max gap", arc.max_gap, "|", arc.proxy)
