"""Compactness, witnesses and small chains of members on graphs with cycles.

Run with ``python3 notebooks/02_graphs.py``.
"""
from fractions import Fraction

from ncstar import corpus
from ncstar.graph_ncstar import connect_chain, decide_properties, local_delta, noncompact_witness
from ncstar.metric_graph import Interior
from ncstar.subcontinuum import Subcontinuum, hausdorff_distance

# %% Only the arc and the circle have a compact hyperspace of non-cut subcontinua.
for name in ("arc", "circle", "triod", "lollipop", "theta", "figure_eight", "k4"):
    r = decide_properties(corpus.NAMED[name]())
    print(f"{name:13s} compact {r.compact!s:5s} connected {r.connected!s:5s} "
          f"components {r.components}  empirical {r.empirical}")

# %% A member sequence escaping to a non-member on the lollipop: points of the loop slide to v.
L = corpus.lollipop()
w = noncompact_witness(L, 6)
print(w.case, [str(S) for S in w.members[:3]], "->", w.limit, "member?", w.limit_is_member)
print("distances:", [str(d) for d in w.distances])

# %% Graphs without loops or hairs fall back to a labeled search.
w = noncompact_witness(corpus.theta(), 4)
print("theta:", w.case, "empirical", w.empirical, "limit", w.limit)

# %% Radius budget and a fine chain of members between two nearby members.
A = Subcontinuum.point(L, Interior("loop", Fraction(1, 2)))
B = Subcontinuum(L, {"loop": [(Fraction(101, 200), Fraction(13, 25))]})
budget = local_delta(L, A, L.point("hair", Fraction(1)))
print("delta:", budget.to_dict())
chain = connect_chain(L, A, B, Fraction(1, 10), 4)
print("chain of", len(chain), "members; largest step",
      max(hausdorff_distance(L, x, y) for x, y in zip(chain, chain[1:])))
