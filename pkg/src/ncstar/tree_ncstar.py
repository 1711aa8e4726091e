"""Non-cut subcontinua of trees: classification, counting and the explicit model.

In a tree ``T`` a subcontinuum ``A`` is non-cut exactly when ``A = T``, or
``A`` is an endpoint, or ``A = T \\ C`` for a component ``C`` of ``T \\ {p}``
with ``p`` not an endpoint. The last kind is organised in families indexed by
``(edge, direction)``: the cut point runs along the edge and the removed
component is the one lying in ``direction``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InputError
from .metric_graph import Chain, GraphPoint, Interior, MetricGraph, Node, render
from .subcontinuum import (
    OpenRegion,
    Subcontinuum,
    boundary,
    complement_components,
    complement_of_region,
    geodesic_segment,
    hausdorff_distance,
    is_noncut,
    remove_component,
)

ZERO, ONE = Fraction(0), Fraction(1)


def _require_tree(T: MetricGraph):
    if not T.is_tree:
        raise DomainError(f"expected a tree, got a {T.classify()}")


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Whole:
    def realize(self, T: MetricGraph) -> Subcontinuum:
        return Subcontinuum.whole(T)


@dataclass(frozen=True)
class EndpointSingleton:
    point: GraphPoint

    def realize(self, T: MetricGraph) -> Subcontinuum:
        return Subcontinuum.point(T, self.point)


@dataclass(frozen=True)
class BranchComplement:
    """``T`` minus the component of ``T \\ {cut}`` with index ``removed``."""

    cut: GraphPoint
    removed: int

    def region(self, T: MetricGraph) -> OpenRegion:
        return complement_components(T, Subcontinuum.point(T, self.cut))[self.removed]

    def realize(self, T: MetricGraph) -> Subcontinuum:
        return complement_of_region(T, self.region(T))


def branch_complement(T: MetricGraph, p: GraphPoint, region: OpenRegion) -> Subcontinuum:
    """``T`` minus ``region``, which must be a component of ``T \\ {p}``."""
    _require_tree(T)
    T.check_point(p)
    if T.order(p) == 1:
        raise DomainError(f"{p} is an endpoint")
    if region not in complement_components(T, Subcontinuum.point(T, p)):
        raise InputError(f"region is not a component of the complement of {p}")
    return complement_of_region(T, region)


@dataclass(frozen=True)
class BranchFamily:
    """Cut point at offset ``t`` of ``edge``; the component toward ``direction`` is removed.

    ``direction`` is ``"head"`` or ``"tail"``. Parameters run over the open
    interval ``(0, 1)`` plus whichever end is a non-endpoint node on the far
    side from ``direction``.
    """

    edge: str
    direction: str
    closed_low: bool
    closed_high: bool

    def contains(self, t) -> bool:
        t = Fraction(t)
        if 0 < t < 1:
            return True
        return (t == 0 and self.closed_low) or (t == 1 and self.closed_high)

    def instantiate(self, T: MetricGraph, t) -> BranchComplement:
        t = Fraction(t)
        if not self.contains(t):
            raise InputError(f"parameter {t} outside family {self.edge}/{self.direction}")
        p = T.point(self.edge, t)
        toward = Interior(self.edge, (t + (1 if self.direction == "head" else 0)) / 2)
        regions = complement_components(T, Subcontinuum.point(T, p))
        idx = next(i for i, r in enumerate(regions) if r.contains(toward))
        return BranchComplement(p, idx)

    def member(self, T: MetricGraph, t) -> Subcontinuum:
        return self.instantiate(T, t).realize(T)


@dataclass
class NcStarDescription:
    graph: MetricGraph
    whole: Whole
    endpoints: list
    families: list

    def family(self, edge: str, direction: str) -> BranchFamily:
        for f in self.families:
            if f.edge == edge and f.direction == direction:
                return f
        raise InputError(f"no family {edge}/{direction}")

    def to_dict(self) -> dict:
        return {
            "whole": True,
            "endpoints": [str(e) for e in self.endpoints],
            "families": [
                {"edge": f.edge, "direction": f.direction,
                 "parameter_range": ("[" if f.closed_low else "(") + "0, 1" + ("]" if f.closed_high else ")")}
                for f in self.families
            ],
        }


def enumerate_ncstar(T: MetricGraph) -> NcStarDescription:
    """Finite parameterized description of every non-cut subcontinuum of ``T``."""
    _require_tree(T)
    families = []
    for e in T.edges:
        families.append(BranchFamily(e.id, "head", T.degree(e.tail) > 1, False))
        families.append(BranchFamily(e.id, "tail", False, T.degree(e.head) > 1))
    return NcStarDescription(T, Whole(), [EndpointSingleton(Node(v)) for v in T.endpoints], families)


@dataclass(frozen=True)
class ClauseMatch:
    clause: str  # "whole", "endpoint" or "branch"
    family: tuple | None = None  # (edge, direction)
    parameter: Fraction | None = None


def match_clause(T: MetricGraph, A: Subcontinuum) -> ClauseMatch:
    """The unique clause (and family parameter) describing a non-cut ``A``."""
    _require_tree(T)
    if A.is_whole:
        return ClauseMatch("whole")
    p = A.single_point
    if p is not None and T.order(p) == 1:
        return ClauseMatch("endpoint")
    regions = complement_components(T, A)
    if len(regions) != 1:
        raise InputError(f"{A} is not a non-cut subcontinuum")
    (cut,) = boundary(T, A)
    region = regions[0]
    if isinstance(cut, Interior):
        probe_head = Interior(cut.edge, (cut.t + 1) / 2)
        direction = "head" if region.contains(probe_head) else "tail"
        return ClauseMatch("branch", (cut.edge, direction), cut.t)
    for eid, end in T.incidences[cut.id]:
        if eid in region.pieces:
            if end == 0:
                return ClauseMatch("branch", (eid, "head"), ZERO)
            return ClauseMatch("branch", (eid, "tail"), ONE)
    raise AssertionError("region does not touch its boundary point")


def component_count(T: MetricGraph) -> int:
    """Number of components of NC*(T): ``2|R| + |E| - 1``, or 1 for an arc."""
    _require_tree(T)
    m, n = len(T.ramification_nodes), len(T.endpoints)
    return 1 if m == 0 else 2 * m + n - 1


# ---------------------------------------------------------------------------
# the model
# ---------------------------------------------------------------------------

@dataclass
class ModelPiece:
    """One component of NC*(T) with a sampled chart ``parameter -> member``.

    Parameters are arclengths along ``chain``. ``limit`` is the non-member
    approached at the open end of a half-open piece (``None`` for the core).
    """

    kind: str  # "nod-leg", "hair", "left", "right"
    chain: Chain
    params: list
    members: list
    limit: Subcontinuum | None = None
    limit_param: Fraction | None = None
    chain_graph: MetricGraph = field(default=None, repr=False)

    @property
    def limit_is_member(self) -> bool | None:
        return None if self.limit is None else is_noncut(self.chain_graph, self.limit)

    def max_step(self) -> Fraction:
        g = self.chain_graph
        return max((hausdorff_distance(g, a, b) for a, b in zip(self.members, self.members[1:])), default=ZERO)


@dataclass
class TreeModel:
    graph: MetricGraph
    core: Subcontinuum
    legs: list  # nod-leg pieces, one per endpoint
    half_open: list  # hair, left and right pieces

    @property
    def piece_count(self) -> int:
        return 1 + len(self.half_open)

    def pieces(self) -> list:
        """Components as lists of sampled members (the n-od first)."""
        nod = [self.core] + [S for leg in self.legs for S in leg.members]
        return [nod] + [p.members for p in self.half_open]

    def to_dict(self) -> dict:
        def piece(p: ModelPiece) -> dict:
            out = {
                "kind": p.kind,
                "chain": {"start": p.chain.start, "end": p.chain.end,
                          "edges": [[e, fwd] for e, fwd in p.chain.steps]},
                "parameters": [render(t) for t in p.params],
                "samples": [S.to_dict() for S in p.members],
            }
            if p.limit is not None:
                out["limit_parameter"] = render(p.limit_param)
                out["limit"] = p.limit.to_dict()
                out["limit_is_member"] = p.limit_is_member
            return out

        return {
            "piece_count": self.piece_count,
            "core": self.core.to_dict(),
            "nod_legs": [piece(p) for p in self.legs],
            "half_open": [piece(p) for p in self.half_open],
        }


def _closure_of_side(T: MetricGraph, v: str, inside: GraphPoint) -> Subcontinuum:
    """Closure of the component of ``T \\ {v}`` that contains ``inside``."""
    for region in complement_components(T, Subcontinuum.point(T, Node(v))):
        if region.contains(inside):
            return region.to_pointset().closure().to_subcontinuum()
    raise AssertionError("point not found")


def build_model(T: MetricGraph, samples_per_piece: int) -> TreeModel:
    """Sampled charts for every component of NC*(T); ``T`` must not be an arc."""
    _require_tree(T)
    if samples_per_piece < 1:
        raise InputError("samples_per_piece must be positive")
    if not T.ramification_nodes:
        raise DomainError("the model needs a ramification point; use enumerate_ncstar for an arc")
    N = samples_per_piece
    legs, half_open = [], []
    for hair in T.hairs():
        e = Node(hair.start)
        # leg of the n-od: remove [e, p) for p at arclength s in (0, len]
        params = [hair.length * j / N for j in range(1, N + 1)]
        members = [remove_component(T, hair.point_at(T, s), e) for s in params]
        legs.append(ModelPiece("nod-leg", hair, params, members, chain_graph=T))
        # hair piece: [e, p] for s in [0, len)
        params = [hair.length * j / N for j in range(N)]
        members = [geodesic_segment(T, e, hair.point_at(T, s)) for s in params]
        limit = geodesic_segment(T, e, Node(hair.end))
        half_open.append(ModelPiece("hair", hair, params, members, limit, hair.length, chain_graph=T))
    for chain in T.internal_chains():
        l, r = Node(chain.start), Node(chain.end)
        mid = chain.point_at(T, chain.length / 2)
        params = [chain.length * j / N for j in range(N)]
        members = [remove_component(T, chain.point_at(T, s), r) for s in params]
        half_open.append(ModelPiece("left", chain, params, members,
                                    _closure_of_side(T, r.id, mid), chain.length, chain_graph=T))
        params = [chain.length * j / N for j in range(1, N + 1)]
        members = [remove_component(T, chain.point_at(T, s), l) for s in params]
        half_open.append(ModelPiece("right", chain, params, members,
                                    _closure_of_side(T, l.id, mid), ZERO, chain_graph=T))
    return TreeModel(T, Subcontinuum.whole(T), legs, half_open)
