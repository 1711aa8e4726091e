"""Non-cut subcontinua of trees: clauses, component counts and the sampled model.

Run with ``python3 notebooks/01_trees.py``.
"""
from fractions import Fraction

from ncstar import corpus
from ncstar.oracle import cluster_components, sample_ncstar
from ncstar.tree_ncstar import build_model, component_count, enumerate_ncstar, match_clause

# %% The triod: three unit legs from a center r.
T = corpus.triod()
desc = enumerate_ncstar(T)
print("endpoint singletons:", [str(e.point) for e in desc.endpoints])
for fam in desc.families:
    print(f"  family {fam.edge}/{fam.direction}: closed at 0 {fam.closed_low}, closed at 1 {fam.closed_high}")

# %% Every grid member falls under exactly one clause.
members = sample_ncstar(T, 4).members().subcontinua()
kinds = {}
for S in members:
    kinds[match_clause(T, S).clause] = kinds.get(match_clause(T, S).clause, 0) + 1
print("grid members at k=4 by clause:", kinds)

# %% Formula against brute-force clustering.
for name in ("arc", "triod", "h_tree", "caterpillar"):
    G = corpus.NAMED[name]()
    report = cluster_components(sample_ncstar(G, 8).members(), Fraction(1, 4))
    print(f"{name:12s} formula {component_count(G):2d}  clusters {report.count:2d}  "
          f"intra {report.max_intra_gap}  inter {report.min_inter_gap}  adequate {report.adequate}")

# %% The model: an n-od through X plus half-open arcs, each with a non-member at its open end.
model = build_model(corpus.h_tree(), 4)
print("pieces:", model.piece_count)
for piece in model.half_open:
    print(f"  {piece.kind:5s} along {piece.chain.start}->{piece.chain.end}: limit {piece.limit} "
          f"member? {piece.limit_is_member}")
