"""Non-cut subcontinua of general finite graphs.

Decisions (compactness, connectedness, equality with ``C(X)``), explicit
sequences of members converging to non-members, the ``delta`` radius that
controls members near a fixed ``A``, and finite order-arc chains linking two
nearby members through members only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InputError, InsufficientResolution
from .metric_graph import Chain, GraphPoint, Interior, MetricGraph, Node, render
from .oracle import cluster_components, enumerate_grid_subcontinua, sample_ncstar
from .subcontinuum import (
    IntrinsicGraph,
    PointSet,
    Subcontinuum,
    boundary,
    complement_components,
    geodesic_segment,
    hausdorff_distance,
    is_noncut,
    point_distance,
    pointset_components,
)
from .tree_ncstar import component_count

ZERO, ONE = Fraction(0), Fraction(1)
TENTH = Fraction(1, 10)


# ---------------------------------------------------------------------------
# property decisions
# ---------------------------------------------------------------------------

@dataclass
class PropertyReport:
    kind: str
    compact: bool
    connected: bool
    continuum: bool
    equals_CX: bool
    homeo_to_X: bool
    locally_connected: bool
    components: int | None
    rationale: dict
    empirical: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "compact": self.compact,
            "connected": self.connected,
            "continuum": self.continuum,
            "equals_CX": self.equals_CX,
            "homeo_to_X": self.homeo_to_X,
            "locally_connected": self.locally_connected,
            "components": self.components,
            "rationale": self.rationale,
            "empirical": self.empirical,
        }


def decide_properties(G: MetricGraph, resolution: int = 4, budget=None) -> PropertyReport:
    """Topological properties of NC*(G).

    Connectedness for graphs that are neither trees nor circles is estimated
    by clustering the grid members at ``resolution`` and is listed under
    ``empirical``.
    """
    kind = G.classify()
    why = {"locally_connected": "finite graph: members near A are joined by order arcs of members"}
    empirical = []
    compact = kind in ("Arc", "Circle")
    if compact:
        why["compact"] = f"{kind.lower()}: the limit of members is always a member"
    elif G.loops():
        why["compact"] = "not compact: points of a loop converge to its cut vertex"
    elif G.hairs():
        why["compact"] = "not compact: members along a hair converge to a non-member"
    else:
        why["compact"] = "not compact: only an arc or a circle has compact NC*"
    components = None
    if kind == "Arc":
        connected, components = True, 1
        why["connected"] = "arc: two order chains from the endpoints glued at X"
    elif kind == "Circle":
        connected, components = True, 1
        why["connected"] = "circle: every subcontinuum is non-cut, so NC* = C(X)"
    elif kind == "Tree":
        components = component_count(G)
        connected = False
        why["connected"] = f"tree: {components} components, 2|R| + |E| - 1"
    else:
        sample = sample_ncstar(G, resolution, budget=budget)
        steps = [e.length / resolution for e in G.edges]
        report = cluster_components(sample, 2 * max(steps))
        components = report.count
        connected = components == 1
        empirical.append("connected")
        why["connected"] = (
            f"grid estimate at resolution {resolution}: {components} cluster(s), "
            f"gap rule {'met' if report.adequate else 'not met'}"
        )
    equals = kind == "Circle"
    why["equals_CX"] = "every subcontinuum of a circle is non-cut" if equals else "some subcontinuum is a cut set"
    homeo = kind == "Arc"
    why["homeo_to_X"] = "arc: NC* is itself an arc" if homeo else "NC* is not homeomorphic to X"
    return PropertyReport(kind, compact, connected, compact and connected, equals, homeo, True,
                          components, why, empirical)


# ---------------------------------------------------------------------------
# witnesses of non-compactness
# ---------------------------------------------------------------------------

@dataclass
class WitnessSequence:
    members: list
    limit: Subcontinuum
    limit_is_member: bool
    distances: list
    case: str  # "loop", "hair-branching", "hair-cycle", "search" or a dendrite case
    empirical: bool = False
    proxy: str | None = None  # the limit statement this finite sequence stands in for

    def verified(self, G: MetricGraph) -> bool:
        """Members are non-cut, the limit is not, and distances strictly decrease."""
        return (
            all(is_noncut(G, S) for S in self.members)
            and not is_noncut(G, self.limit)
            and all(b < a for a, b in zip(self.distances, self.distances[1:]))
            and self.distances == [hausdorff_distance(G, S, self.limit) for S in self.members]
        )

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "empirical": self.empirical,
            "proxy": self.proxy,
            "members": [S.to_dict() for S in self.members],
            "limit": self.limit.to_dict(),
            "limit_is_member": self.limit_is_member,
            "distances": [render(d) for d in self.distances],
        }


def _witness(G, members, limit, case, empirical=False) -> WitnessSequence:
    dists = [hausdorff_distance(G, S, limit) for S in members]
    return WitnessSequence(members, limit, is_noncut(G, limit), dists, case, empirical)


def noncompact_witness(G: MetricGraph, N: int = 8, budget=None) -> WitnessSequence:
    """``N`` members converging to a non-member.

    Tried in order: a loop (points tending to its vertex), a hair (segments
    or points tending to the hair's base), then an exhaustive local search
    around grid non-members, which is flagged empirical.
    """
    if N < 1:
        raise InputError("N must be positive")
    kind = G.classify()
    if kind in ("Arc", "Circle"):
        raise DomainError(f"NC* of a {kind.lower()} is compact")
    loops = G.loops()
    if loops:
        loop = loops[0]
        members = [Subcontinuum.point(G, loop.point_at(G, loop.length / 2 ** (n + 1))) for n in range(1, N + 1)]
        return _witness(G, members, Subcontinuum.point(G, Node(loop.start)), "loop")
    hairs = G.hairs()
    if hairs:
        hair = hairs[0]
        e, r = Node(hair.start), Node(hair.end)
        pieces = complement_components(G, Subcontinuum.point(G, r))
        if len(pieces) >= 3:
            members = [geodesic_segment(G, e, hair.point_at(G, hair.length * (1 - Fraction(1, 2 ** n))))
                       for n in range(1, N + 1)]
            return _witness(G, members, geodesic_segment(G, e, r), "hair-branching")
        germ = _cycle_germ(G, hair, r.id)
        members = [Subcontinuum.point(G, germ(Fraction(1, 2 ** (n + 1)))) for n in range(1, N + 1)]
        return _witness(G, members, Subcontinuum.point(G, r), "hair-cycle")
    return _search_witness(G, N, budget)


def _cycle_germ(G: MetricGraph, hair: Chain, r: str):
    """Parameterization ``s -> point`` of a non-hair edge leaving ``r`` (``s`` a fraction of it)."""
    hair_edges = {eid for eid, _ in hair.steps}
    for eid, end in G.incidences[r]:
        if eid not in hair_edges:
            return lambda s, eid=eid, end=end: G.point(eid, s if end == 0 else 1 - s)
    raise AssertionError("ramification point with a single edge")


def _germs(G: MetricGraph, x: GraphPoint):
    """Directions leaving ``x``: ``(edge, t0, sign)`` with ``t0`` the offset of ``x``."""
    if isinstance(x, Interior):
        return [(x.edge, x.t, 1), (x.edge, x.t, -1)]
    return [(eid, ZERO if end == 0 else ONE, 1 if end == 0 else -1) for eid, end in G.incidences[x.id]]


def _germ_piece(G: MetricGraph, germ, h, keep_start: bool) -> PointSet | None:
    """The segment of length ``h`` along ``germ`` (start point included iff ``keep_start``)."""
    eid, t0, sign = germ
    dt = h / G.edge(eid).length
    t1 = t0 + sign * dt
    if not 0 <= t1 <= 1:
        return None
    lo, hi = min(t0, t1), max(t0, t1)
    lo_closed = keep_start if lo == t0 else True
    hi_closed = keep_start if hi == t0 else True
    nodes = set()
    e = G.edge(eid)
    if lo == 0 and lo_closed:
        nodes.add(e.tail)
    if hi == 1 and hi_closed:
        nodes.add(e.head)
    return PointSet(G, nodes, {eid: [(lo, hi, lo_closed and lo > 0, hi_closed and hi < 1)]})


def _perturbations(G: MetricGraph, L: Subcontinuum, h):
    """Candidates obtained by moving the ends of ``L`` by exactly ``h``."""
    base = L.to_pointset()
    single = L.single_point
    points = [single] if single is not None else sorted(boundary(G, L), key=str)
    moves = []
    for x in points:
        for germ in _germs(G, x):
            piece = _germ_piece(G, germ, h, True)
            if piece is None:
                continue
            eid, t0, sign = germ
            probe = G.point(eid, t0 + sign * h / 2 / G.edge(eid).length)
            if L.contains(probe):
                moves.append(("retract", piece - _far_end(G, germ, h)))
            else:
                moves.append(("extend", piece))
            if single is not None:
                yield _far_end(G, germ, h).to_subcontinuum()
    largest = len(moves) if len(moves) <= 10 else 2
    for size in range(1, largest + 1):
        for combo in itertools.combinations(moves, size):
            ps = base
            for kind, piece in combo:
                ps = (ps | piece) if kind == "extend" else (ps - piece)
            if ps.is_empty() or not ps.is_closed():
                continue
            try:
                yield ps.to_subcontinuum()
            except (InputError, DomainError):
                continue


def _far_end(G: MetricGraph, germ, h) -> PointSet | None:
    eid, t0, sign = germ
    t1 = t0 + sign * h / G.edge(eid).length
    if not 0 <= t1 <= 1:
        return None
    return PointSet.of_points(G, [G.point(eid, t1)])


def _search_witness(G: MetricGraph, N: int, budget) -> WitnessSequence:
    grid = enumerate_grid_subcontinua(G, 2, budget)
    hmin = min(e.length for e in G.edges)
    for i, flag in enumerate(grid.member_flags):
        if flag:
            continue
        L = grid.subcontinuum(i)
        members = []
        for j in range(1, N + 1):
            h = hmin / 2 ** (j + 1)
            best = None
            for C in _perturbations(G, L, h):
                if not is_noncut(G, C):
                    continue
                key = (hausdorff_distance(G, C, L), repr(C))
                if best is None or key < best[0]:
                    best = (key, C)
            if best is None:
                break
            members.append(best[1])
        if len(members) == N:
            w = _witness(G, members, L, "search", empirical=True)
            if all(b < a for a, b in zip(w.distances, w.distances[1:])):
                return w
    raise InsufficientResolution("no witness found at this resolution", required=None)


# ---------------------------------------------------------------------------
# the delta radius and its consequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaBudget:
    eps1: Fraction
    eps2: Fraction
    eps3: Fraction
    delta: Fraction
    p0: GraphPoint | None

    def to_dict(self) -> dict:
        return {
            "eps1": render(self.eps1), "eps2": render(self.eps2), "eps3": render(self.eps3),
            "delta": render(self.delta), "p0": None if self.p0 is None else str(self.p0),
        }


def default_basepoint(G: MetricGraph, A: Subcontinuum) -> GraphPoint:
    """A point of ``X \\ A`` farthest from ``A`` among nodes and gap midpoints."""
    if A.is_whole:
        raise InputError("X has no complement point")
    cands = [Node(v) for v in G.nodes if not A.contains(Node(v))]
    for region in complement_components(G, A):
        for eid, ivs in region.pieces.items():
            cands.extend(G.point(eid, (lo + hi) / 2) for lo, hi in ivs)
    return max(cands, key=lambda p: (point_distance(G, p, A), _neg_key(str(p))))


def _neg_key(s: str):
    return tuple(-ord(c) for c in s)


def local_delta(G: MetricGraph, A: Subcontinuum, p0: GraphPoint | None = None) -> DeltaBudget:
    """The radius ``delta = min(eps1, eps2, eps3)`` attached to a member ``A`` and basepoint ``p0``."""
    if A.is_whole:
        return DeltaBudget(TENTH, TENTH, TENTH, TENTH, None)
    if not is_noncut(G, A):
        raise DomainError(f"{A} is a cut set")
    if p0 is None:
        raise InputError("a basepoint outside A is required when A is not X")
    G.check_point(p0)
    if A.contains(p0):
        raise InputError(f"basepoint {p0} lies in A")
    bd = sorted(boundary(G, A), key=str)
    pair = [G.distance(x, y) for x, y in itertools.combinations(bd, 2)]
    eps1 = min(pair + [ONE]) / 4
    verts = [Node(v) for v in G.vertices]
    near = [G.distance(x, v) for x in bd for v in verts if x != v]
    eps2 = min(near + [ONE]) / 4
    eps3 = min(point_distance(G, p0, A) / 4, TENTH)
    return DeltaBudget(eps1, eps2, eps3, min(eps1, eps2, eps3), p0)


def chain_closure(G: MetricGraph, chain: Chain) -> Subcontinuum:
    return Subcontinuum(G, {eid: [(ZERO, ONE)] for eid, _ in chain.steps})


def check_uniones(G: MetricGraph, A: Subcontinuum, B: Subcontinuum, p0: GraphPoint | None) -> dict:
    """The five consequences of ``H(A, B) < delta`` for members ``A``, ``B``.

    Keys 1..5; ``None`` marks a conclusion whose hypothesis does not apply.
    """
    out = {}
    out[1] = None if A.is_whole else not B.contains(p0)
    out[2] = all(not B.contains(Node(v)) for v in G.vertices if not A.contains(Node(v)))
    closures = [chain_closure(G, c) for c in G.chains]
    out[3] = all(not L.issubset(B) for L in closures if not L.issubset(A))
    singleton = A.single_point is not None
    if not singleton:
        ram = PointSet.of_points(G, [Node(r) for r in G.ramification_nodes])
        Aps, Bps = A.to_pointset(), B.to_pointset()
        interior = Aps - PointSet.of_points(G, boundary(G, A))
        pieces = pointset_components(Aps - ram)
        out[4] = all((Bps & E & interior).is_empty() is False for E in pieces) and A.intersects(B)
    else:
        out[4] = None
    if singleton and not A.intersects(B):
        union = A.to_pointset() | B.to_pointset()
        out[5] = any(union.issubset(L.to_pointset()) for L in closures)
    else:
        out[5] = None
    return out


def union_hypotheses(G: MetricGraph, A: Subcontinuum, B: Subcontinuum, p0: GraphPoint | None) -> bool:
    """Whether ``B`` avoids ``p0`` and the vertices outside ``A`` while meeting ``A``."""
    if not A.is_whole and B.contains(p0):
        return False
    if any(B.contains(Node(v)) for v in G.vertices if not A.contains(Node(v))):
        return False
    return A.intersects(B)


# ---------------------------------------------------------------------------
# order arcs and chains
# ---------------------------------------------------------------------------

def _along(H: MetricGraph, a: str, c: str, s) -> GraphPoint:
    """Point at distance ``s`` from node ``a`` on a shortest path to node ``c``."""
    nd = H.node_distances
    D = nd[a][c]
    if s <= 0:
        return Node(a)
    if s >= D:
        return Node(c)
    for e in sorted(H.edges, key=lambda e: e.id):
        if e.is_loop:
            continue
        for u, w, fwd in ((e.tail, e.head, True), (e.head, e.tail, False)):
            du = nd[a][u]
            if du + e.length + nd[w][c] == D and du <= s <= du + e.length:
                frac = (s - du) / e.length
                return H.point(e.id, frac if fwd else 1 - frac)
    raise AssertionError("no point on the geodesic")


def _growth_plan(G: MetricGraph, S: Subcontinuum, T: Subcontinuum) -> list:
    """Legs ``(intrinsic graph, start, target, reach)`` filling ``T \\ S`` from ``S``."""
    plan = []
    for comp in pointset_components(T.to_pointset() - S.to_pointset()):
        closure = comp.closure().to_subcontinuum()
        contact = closure.to_pointset() & S.to_pointset()
        if any(lo != hi for segs in contact.segments.values() for lo, hi, _, _ in segs):
            raise DomainError("growth region meets the base along an interval")
        ig = IntrinsicGraph.of(G, closure)
        H = ig.graph
        attach = sorted({ig.to_local(p).id for p in _points_of(G, contact)})
        rams = H.ramification_nodes
        if len(rams) > 1 or (H.cycle_rank > 0):
            raise DomainError("growth region is neither an arc nor an n-od")
        if rams:
            center = rams[0]
            free = [v for v in H.endpoints if v not in attach]
            if free:
                raise DomainError("n-od growth region has a free end")
            plan.extend((ig, a, center, H.node_distances[a][center]) for a in attach)
        elif len(attach) == 1:
            (a,) = attach
            (other,) = [v for v in H.endpoints if v != a]
            plan.append((ig, a, other, H.node_distances[a][other]))
        elif len(attach) == 2:
            a, b = attach
            half = H.node_distances[a][b] / 2
            plan.extend([(ig, a, b, half), (ig, b, a, half)])
        else:
            raise DomainError("growth region has no attachment point")
    return plan


def _points_of(G: MetricGraph, ps: PointSet) -> list:
    pts = [Node(v) for v in ps.nodes]
    for eid, segs in ps.segments.items():
        pts.extend(Interior(eid, lo) for lo, hi, _, _ in segs)
    return pts


def order_arc(G: MetricGraph, S: Subcontinuum, T: Subcontinuum, max_gap, samples: int = 4) -> list:
    """Finite increasing chain ``S = beta(0) <= ... <= beta(1) = T`` with H-gaps at most ``max_gap``.

    Each component of ``T \\ S`` grows from its attachment points at speeds
    proportional to its legs, so every leg of an n-od reaches the core at
    the same parameter.
    """
    if not S.issubset(T):
        raise InputError("order arcs need S contained in T")
    if S == T:
        return [S]
    plan = _growth_plan(G, S, T)

    def beta(t):
        out = S
        for ig, a, c, reach in plan:
            x = _along(ig.graph, a, c, reach * t)
            out = out.union(ig.lift(geodesic_segment(ig.graph, Node(a), x)))
        return out

    params = [Fraction(j, samples) for j in range(samples + 1)]
    values = {t: beta(t) for t in params}
    values[ONE] = T
    while True:
        params.sort()
        wide = [(a, b) for a, b in zip(params, params[1:])
                if hausdorff_distance(G, values[a], values[b]) > max_gap]
        if not wide:
            break
        for a, b in wide:
            m = (a + b) / 2
            values[m] = beta(m)
            params.append(m)
    return [values[t] for t in sorted(params)]


def irreducible_arc(G: MetricGraph, A: Subcontinuum, B: Subcontinuum) -> Subcontinuum:
    """Smallest arc inside one edge chain containing the point ``A`` and the set ``B``."""
    a = A.single_point
    if a is None:
        raise DomainError("the disjoint case needs A to be a point")
    union = A.to_pointset() | B.to_pointset()
    for chain in G.chains:
        L = chain_closure(G, chain)
        if not union.issubset(L.to_pointset()):
            continue
        ig = IntrinsicGraph.of(G, L)
        b_single = B.single_point
        ends = [b_single] if b_single is not None else sorted(boundary(G, B), key=str)
        ends = [p for p in ends if p is not None] or [next(iter(_points_of(G, B.to_pointset())))]
        loc_a = ig.to_local(a)
        best = min(ends, key=lambda p: (ig.graph.distance(loc_a, ig.to_local(p)), str(p)))
        return B.union(ig.lift(geodesic_segment(ig.graph, loc_a, ig.to_local(best))))
    raise DomainError("A and B do not lie in a common edge")


def connect_chain(G: MetricGraph, A: Subcontinuum, B: Subcontinuum, eps, steps: int,
                  p0: GraphPoint | None = None) -> list:
    """Members ``A = S_0, ..., S_M = B`` with consecutive H-gaps at most ``eps / steps``.

    Every element is checked to be non-cut and within ``eps`` of ``A``.
    """
    eps = Fraction(eps)
    if steps < 1:
        raise InputError("steps must be positive")
    for S in (A, B):
        if not is_noncut(G, S):
            raise DomainError(f"{S} is a cut set")
    if A == B:
        return [A]
    if p0 is None and not A.is_whole:
        p0 = default_basepoint(G, A)
    budget = local_delta(G, A, p0)
    if eps <= 0 or eps > budget.delta:
        raise InputError(f"eps {eps} exceeds the budget {budget.delta}")
    if hausdorff_distance(G, A, B) >= eps:
        raise InputError("H(A, B) must be below eps")
    gap = eps / steps
    if A.intersects(B):
        top = A.union(B)
        first = order_arc(G, A, top, gap)
        second = order_arc(G, B, top, gap)
    else:
        K = irreducible_arc(G, A, B)
        first = order_arc(G, A, K, gap)
        second = order_arc(G, B, K, gap)
    chain = first + second[::-1][1:]
    for S in chain:
        if not is_noncut(G, S):
            raise DomainError(f"chain element {S} is a cut set")
        if hausdorff_distance(G, S, A) > eps:
            raise DomainError(f"chain element {S} leaves the eps-ball")
    return chain
