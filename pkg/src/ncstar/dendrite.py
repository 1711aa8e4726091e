"""Finite tree approximants of a dendrite with dense endpoints.

Stage 0 is the unit arc ``a-b`` (edge ``"e"``). Each later stage splits every
edge ``X`` of length ``l`` at its midpoint ``"m:X"`` into ``X0`` and ``X1``
and attaches ``s - 2`` hairs ``Xh1, Xh2, ...`` of length ``l / 3`` with tips
``"t:Xh1", ...``. Node names never change between stages, so a point keeps
its address in every deeper approximant.

Results here are finite-scale proxies for limit statements about the
dendrite itself (zero-dimensionality, nowhere-compactness) and are labeled so.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, DomainError, InputError, InsufficientResolution
from .graph_ncstar import WitnessSequence
from .metric_graph import GraphPoint, Interior, MetricGraph, Node, render
from .oracle import sample_ncstar
from .subcontinuum import (
    PointSet,
    Subcontinuum,
    complement_components,
    geodesic_segment,
    hausdorff_distance,
    is_noncut,
    remove_component,
)
from .tree_ncstar import component_count

ZERO, ONE = Fraction(0), Fraction(1)
MAX_EDGES = 200_000

ZERO_DIM_PROXY = "zero-dimensionality, via clopen families with shrinking diameter on a finite approximant"
NOWHERE_COMPACT_PROXY = "nowhere-compactness, via a finite member sequence near Y with a non-member limit"
TOTALLY_DISCONNECTED_PROXY = "failure of total disconnectedness, via an arc of members on a finite tree"


@dataclass
class DendriteApproximant:
    s: int
    depth: int
    graph: MetricGraph
    born: dict  # node id -> stage at which it appeared
    parent: dict  # edge id -> (parent edge id, offset, scale) for the last stage

    @property
    def a(self) -> Node:
        return Node("a")

    @property
    def b(self) -> Node:
        return Node("b")

    def arc_edges(self) -> list:
        """Edges of the arc ``ab`` in order from ``a``."""
        out = ["e"]
        for _ in range(self.depth):
            out = [x + c for x in out for c in "01"]
        return out

    def ab_point(self, x) -> GraphPoint:
        """The point of ``ab`` at distance ``x`` from ``a``."""
        x = Fraction(x)
        if not 0 <= x <= 1:
            raise InputError(f"{x} is not on ab")
        n = 2 ** self.depth
        j = min(int(x * n), n - 1)
        return self.graph.point(self.arc_edges()[j], x * n - j)

    def ab_position(self, p: GraphPoint):
        """Distance from ``a`` along ``ab``, or ``None`` off the arc."""
        n = 2 ** self.depth
        edges = self.arc_edges()
        if isinstance(p, Interior):
            if p.edge not in edges:
                return None
            return (edges.index(p.edge) + p.t) / n
        if p.id == "a":
            return ZERO
        for j, eid in enumerate(edges):
            if self.graph.edge(eid).head == p.id:
                return Fraction(j + 1, n)
        return None

    def ab_ramification(self) -> list:
        """Ramification points of ``ab`` in order from ``a``."""
        n = 2 ** self.depth
        return [self.ab_point(Fraction(j, n)) for j in range(1, n)]

    def mesh(self) -> Fraction:
        """Every point lies within this distance of a ramification point (depth >= 1)."""
        return max(e.length for e in self.graph.edges)

    def embed(self, p: GraphPoint, stage: int) -> GraphPoint:
        """Image in this approximant of a point given by its address at ``stage``."""
        if stage > self.depth:
            raise InputError("cannot embed into a shallower approximant")
        if isinstance(p, Node):
            return p
        eid, t = p.edge, p.t
        for _ in range(self.depth - stage):
            if t == Fraction(1, 2):
                return Node(f"m:{eid}")
            eid, t = (eid + "0", 2 * t) if t < Fraction(1, 2) else (eid + "1", 2 * t - 1)
        return self.graph.point(eid, t)

    def component_count(self) -> int:
        return component_count(self.graph)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "depth": self.depth,
            "graph": self.graph.to_dict(),
            "addresses": {v: self.born[v] for v in sorted(self.born)},
            "nesting": {e: [p, render(o), render(c)] for e, (p, o, c) in sorted(self.parent.items())},
            "endpoints": len(self.graph.endpoints),
            "ramification_points": len(self.graph.ramification_nodes),
            "mesh": render(self.mesh()),
        }


def build_approximant(s: int, d: int, max_edges: int = MAX_EDGES) -> DendriteApproximant:
    """Stage ``d`` of the scheme with ``s - 2`` hairs per midpoint (ramification order ``s``)."""
    if s < 3:
        raise InputError("branching must be at least 3")
    if d < 0:
        raise InputError("depth must be nonnegative")
    if s ** d > max_edges:
        raise BudgetError(f"depth {d} needs {s ** d} edges, above {max_edges}", bound=s ** d)
    edges = [("e", "a", "b", ONE)]
    born = {"a": 0, "b": 0}
    parent = {"e": ("e", ZERO, ONE)}
    for stage in range(1, d + 1):
        nxt, parent = [], {}
        for eid, u, w, ln in edges:
            m = f"m:{eid}"
            born[m] = stage
            nxt.append((eid + "0", u, m, ln / 2))
            nxt.append((eid + "1", m, w, ln / 2))
            parent[eid + "0"] = (eid, ZERO, Fraction(1, 2))
            parent[eid + "1"] = (eid, Fraction(1, 2), Fraction(1, 2))
            for i in range(1, s - 1):
                hid = f"{eid}h{i}"
                tip = f"t:{hid}"
                born[tip] = stage
                nxt.append((hid, m, tip, ln / 3))
                parent[hid] = (eid, Fraction(1, 2), ZERO)
        edges = nxt
    graph = MetricGraph.build(edges)
    return DendriteApproximant(s, d, graph, born, parent)


def _branch(T: DendriteApproximant, x: GraphPoint) -> Subcontinuum:
    """``B_x``: X minus the component of ``X \\ {x}`` containing ``a``."""
    return remove_component(T.graph, x, T.a)


def _branch_closure_after(T: DendriteApproximant, x: GraphPoint) -> Subcontinuum:
    """Limit of ``B_y`` as ``y`` approaches ``x`` along ``ab`` from the ``b`` side."""
    probe = T.ab_point(T.ab_position(x) + Fraction(1, 2 ** (T.depth + 2)))
    for region in complement_components(T.graph, Subcontinuum.point(T.graph, x)):
        if region.contains(probe):
            return region.to_pointset().closure().to_subcontinuum()
    raise AssertionError("no b-side component")


# ---------------------------------------------------------------------------
# branch-cut families and their clopen checks
# ---------------------------------------------------------------------------

@dataclass
class BranchCutFamily:
    """``{B_x : x in pq minus p}`` for ramification points ``p`` before ``q`` on ``ab``."""

    approximant: DendriteApproximant
    p: GraphPoint
    q: GraphPoint
    C_p: Subcontinuum  # closure of a side branch at p
    C_q: Subcontinuum  # closure of a side branch at q

    @property
    def lo(self) -> Fraction:
        return self.approximant.ab_position(self.p)

    @property
    def hi(self) -> Fraction:
        return self.approximant.ab_position(self.q)

    def member_at(self, x) -> Subcontinuum:
        x = Fraction(x)
        if not self.lo < x <= self.hi:
            raise InputError(f"{x} is outside (p, q]")
        return _branch(self.approximant, self.approximant.ab_point(x))

    def samples(self, n: int) -> list:
        return [(self.lo + (self.hi - self.lo) * j / n) for j in range(1, n + 1)]

    def contains(self, K: Subcontinuum) -> bool:
        """Whether ``K = B_x`` for some ``x`` in ``(p, q]``."""
        T = self.approximant
        if K.contains(T.a) or K.is_whole:
            return False
        comps = complement_components(T.graph, K)
        if len(comps) != 1 or not comps[0].contains(T.a):
            return False
        from .subcontinuum import boundary

        bd = boundary(T.graph, K)
        if len(bd) != 1:
            return False
        (x,) = bd
        pos = T.ab_position(x)
        return pos is not None and self.lo < pos <= self.hi and _branch(T, x) == K

    def vietoris_sets(self):
        """``(B_p - {p}, B_q - closure(C_q), C_q)`` as point sets."""
        T = self.approximant
        G = T.graph
        Bp = _branch(T, self.p).to_pointset() - PointSet.of_points(G, [self.p])
        Bq = _branch(T, self.q).to_pointset() - self.C_q.to_pointset()
        Cq = self.C_q.to_pointset() - PointSet.of_points(G, [self.q])
        return Bp, Bq, Cq

    def in_vietoris(self, K: Subcontinuum) -> bool:
        U1, U2, U3 = self.vietoris_sets()
        ps = K.to_pointset()
        return ps.issubset(U1 | U2 | U3) and all(ps.intersects(U) for U in (U1, U2, U3))


def _side_branch(T: DendriteApproximant, x: GraphPoint) -> Subcontinuum:
    """Closure of the first component of ``X \\ {x}`` off the arc ``ab``."""
    G = T.graph
    pos = T.ab_position(x)
    step = Fraction(1, 2 ** (T.depth + 2))
    on_arc = [T.ab_point(pos - step), T.ab_point(pos + step)]
    for region in complement_components(G, Subcontinuum.point(G, x)):
        if not any(region.contains(y) for y in on_arc):
            return region.to_pointset().closure().to_subcontinuum()
    raise InputError(f"{x} has no side branch")


def branch_cut_family(T: DendriteApproximant, p: GraphPoint, q: GraphPoint) -> BranchCutFamily:
    for x in (p, q):
        pos = T.ab_position(x)
        if pos is None or not 0 < pos < 1:
            raise InputError(f"{x} is not an inner point of ab")
        if T.graph.order(x) < 3:
            raise InputError(f"{x} is not a ramification point")
    if not T.ab_position(p) < T.ab_position(q):
        raise InputError("q must separate p from b")
    return BranchCutFamily(T, p, q, _side_branch(T, p), _side_branch(T, q))


@dataclass
class ObservationCheck:
    monotone: bool  # A_u inside A_w and B_w inside B_u minus u, for u before w
    exclusions: bool  # B_x avoids A_p and C_p and contains C_q


def observation_checks(family: BranchCutFamily, n: int = 8) -> ObservationCheck:
    T = family.approximant
    G = T.graph
    xs = family.samples(n)
    members = {x: family.member_at(x) for x in xs}
    monotone = True
    for u, w in zip(xs, xs[1:]):
        Bu, Bw = members[u].to_pointset(), members[w].to_pointset()
        Au, Aw = Bu.complement(), Bw.complement()
        point_u = PointSet.of_points(G, [T.ab_point(u)])
        monotone &= Au < Aw and Bw.issubset(Bu - point_u)
    Ap = _branch(T, family.p).to_pointset().complement()
    Cp = family.C_p.to_pointset() - PointSet.of_points(G, [family.p])
    Cq = family.C_q.to_pointset() - PointSet.of_points(G, [family.q])
    exclusions = all(
        not B.to_pointset().intersects(Ap | Cp) and Cq.issubset(B.to_pointset()) for B in members.values()
    )
    return ObservationCheck(monotone, exclusions)


@dataclass
class ClopenReport:
    verdict: str  # "clopen", "not clopen" or "insufficient resolution"
    gap: Fraction | None
    family_size: int
    vietoris_agrees: bool
    resolution: int
    proxy: str = ZERO_DIM_PROXY

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "gap": None if self.gap is None else render(self.gap),
            "family_size": self.family_size,
            "vietoris_agrees": self.vietoris_agrees,
            "resolution": self.resolution,
            "proxy": self.proxy,
        }


def clopen_family_check(T: DendriteApproximant, family: BranchCutFamily, k: int) -> ClopenReport:
    """Compare the family with its Vietoris description on the grid members at resolution ``k``."""
    sample = sample_ncstar(T.graph, k)
    inside, agree = [], True
    for i in range(sample.count):
        K = sample.subcontinuum(i)
        fam = family.contains(K)
        if fam != family.in_vietoris(K):
            agree = False
        if fam:
            inside.append(i)
    if not inside:
        return ClopenReport("insufficient resolution", None, 0, agree, k)
    outside = [i for i in range(sample.count) if i not in set(inside)]
    units = sample.distance_units
    gap = sample.grid.to_fraction(units[inside][:, outside].min()) if outside else None
    ok = agree and (gap is None or gap > 0)
    return ClopenReport("clopen" if ok else "not clopen", gap, len(inside), agree, k)


# ---------------------------------------------------------------------------
# shrinking bases
# ---------------------------------------------------------------------------

@dataclass
class BasisLevel:
    n: int
    left: GraphPoint
    right: GraphPoint
    diameter: Fraction
    contains_Y: bool


@dataclass
class BasisReport:
    case: str  # "ordinary" or "ramification"
    levels: list
    eps: Fraction | None
    reached: int | None  # first n with diameter <= eps
    proxy: str = ZERO_DIM_PROXY

    @property
    def nonincreasing(self) -> bool:
        d = [lv.diameter for lv in self.levels]
        return all(b <= a for a, b in zip(d, d[1:]))

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "levels": [{"n": lv.n, "left": str(lv.left), "right": str(lv.right),
                        "diameter": render(lv.diameter), "contains_Y": lv.contains_Y} for lv in self.levels],
            "eps": None if self.eps is None else render(self.eps),
            "reached": self.reached,
            "verdict": "ok" if self.reached is not None else ("increase depth" if self.eps is not None else "n/a"),
            "nonincreasing": self.nonincreasing,
            "proxy": self.proxy,
        }


def shrinking_basis(T: DendriteApproximant, p: GraphPoint, n_max: int, eps=None) -> BasisReport:
    """Nested families ``{B_x : x in (q_n, r_n]}`` around ``Y = B_p`` with exact H-diameters.

    ``q_n`` and ``r_n`` are the closest ramification points of ``ab`` of
    stage ``n`` on either side of ``p``. For a ramification point ``p`` the
    right end is ``p`` itself. The diameter of a family is the supremum
    ``H(B+_{q_n}, B_{r_n})`` where ``B+_{q_n}`` is the limit of ``B_x`` as
    ``x`` decreases to ``q_n``.
    """
    G = T.graph
    pos = T.ab_position(p)
    if pos is None:
        raise InputError(f"{p} is not on ab")
    if pos in (0, 1):
        raise DomainError("Y must be a branch complement at an inner point of ab")
    ramified = G.order(p) >= 3
    levels = []
    for n in range(1, T.depth + 1):
        if len(levels) >= n_max:
            break
        scale = 2 ** n
        left = Fraction(math.ceil(pos * scale) - 1, scale)
        right = pos if ramified else Fraction(math.floor(pos * scale) + 1, scale)
        if left <= 0 or right >= 1:
            continue
        q, r = T.ab_point(left), T.ab_point(right)
        diam = hausdorff_distance(G, _branch_closure_after(T, q), _branch(T, r))
        levels.append(BasisLevel(n, q, r, diam, left < pos <= right))
    reached = None
    if eps is not None:
        eps = Fraction(eps)
        reached = next((lv.n for lv in levels if lv.diameter <= eps), None)
    return BasisReport("ramification" if ramified else "ordinary", levels, eps, reached)


# ---------------------------------------------------------------------------
# nowhere-compactness witnesses
# ---------------------------------------------------------------------------

def _endpoint_witness(T: DendriteApproximant, e: GraphPoint, eps, N: int) -> WitnessSequence:
    G = T.graph
    from_e = G.distances_from(e.id)
    rams = [Node(v) for v in G.ramification_nodes if from_e[v] < eps]
    if not rams:
        # the ramification points closest to a sit at distance 2^-depth along ab
        need = max(T.depth + 1, math.ceil(1 / eps).bit_length())
        raise InsufficientResolution("no ramification point within eps of the endpoint", required=need)
    near = [v for v in G.endpoints if v != e.id and from_e[v] < eps]
    best = None
    for t in sorted(rams, key=lambda t: (T.born[t.id], from_e[t.id], t.id)):
        from_t = G.distances_from(t.id)
        chain, last = [], None
        for v in sorted(near, key=lambda v: (-from_t[v], v)):
            if last is None or from_t[v] < last:
                chain.append(Node(v))
                last = from_t[v]
        if best is None or len(chain) > len(best[1]):
            best = (t, chain)
        if len(chain) >= N:
            break
    t, chain = best
    if len(chain) < N:
        raise InsufficientResolution(
            f"only {len(chain)} endpoints approach a ramification point within eps",
            required=T.depth + N - len(chain)
        )
    chain = chain[-N:]
    members = [Subcontinuum.point(G, z) for z in chain]
    limit = Subcontinuum.point(G, t)
    return _finish(G, members, limit, "dendrite-endpoint")


def _finish(G, members, limit, case) -> WitnessSequence:
    dists = [hausdorff_distance(G, S, limit) for S in members]
    return WitnessSequence(members, limit, is_noncut(G, limit), dists, case, False, NOWHERE_COMPACT_PROXY)


def _cut_witness(T: DendriteApproximant, q: GraphPoint, anchor: GraphPoint, eps, N: int, Y=None) -> WitnessSequence:
    """Members ``closure(Y_k)`` growing toward the ramification point ``y`` between ``q`` and ``anchor``."""
    G = T.graph
    if Y is None:
        Y = remove_component(G, q, anchor)
    path = geodesic_segment(G, q, anchor)
    rams = [Node(v) for v in G.ramification_nodes if path.contains(Node(v)) and Node(v) != q]
    if not rams:
        raise InsufficientResolution("no ramification point between q and the removed side", required=T.depth + 1)
    y = min(rams, key=lambda v: (G.distance(v, q), v.id))
    # the edge at y pointing toward q
    toward = None
    for eid, end in G.incidences[y.id]:
        probe = G.point(eid, Fraction(1, 2))
        if geodesic_segment(G, y, q).contains(probe):
            toward = (eid, end)
            break
    eid, end = toward
    members = []
    for k in range(1, N + 1):
        s = Fraction(1, 2 ** (k + 1))
        yk = G.point(eid, s if end == 0 else 1 - s)
        members.append(remove_component(G, yk, y))
    limit = None
    for region in complement_components(G, Subcontinuum.point(G, y)):
        if region.contains(q) or (isinstance(q, Node) and q.id in region.nodes):
            limit = region.to_pointset().closure().to_subcontinuum()
    if limit is None:
        raise AssertionError("q not found beside y")
    far = max(hausdorff_distance(G, S, Y) for S in members + [limit])
    if far >= eps:
        raise InsufficientResolution(f"members reach distance {far} from Y, not below {eps}", required=T.depth + 1)
    return _finish(G, members, limit, "dendrite-branch")


def nowhere_compact_witness(T: DendriteApproximant, case: int, eps, N: int = 6, point=None) -> WitnessSequence:
    """``N`` members within ``eps`` of ``Y`` converging to a non-member.

    ``case`` selects ``Y``: 1 for an endpoint singleton (default ``{a}``),
    2 for a branch complement ``B_q`` at an inner point ``q`` of ``ab``
    (default the ordinary point at 17/32), 3 for ``Y = X``.
    """
    eps = Fraction(eps)
    if eps <= 0 or N < 1:
        raise InputError("eps and N must be positive")
    G = T.graph
    if case == 1:
        e = point if point is not None else T.a
        if G.order(e) != 1:
            raise InputError(f"{e} is not an endpoint")
        return _endpoint_witness(T, e, eps, N)
    if case == 2:
        q = point if point is not None else T.ab_point(Fraction(17, 32))
        if G.order(q) == 1:
            raise InputError("q must not be an endpoint")
        return _cut_witness(T, q, T.a, eps, N)
    if case == 3:
        if T.depth < 2:
            raise InsufficientResolution("case 3 needs two ramification points on ab", required=2)
        step = Fraction(1, 2 ** T.depth)
        q = T.ab_point(3 * step / 2)
        Y2 = remove_component(G, q, T.a)
        lead = hausdorff_distance(G, Y2, Subcontinuum.whole(G))
        if lead >= eps:
            raise InsufficientResolution("no branch complement close enough to X", required=T.depth + 1)
        w = _cut_witness(T, q, T.a, eps - lead, N, Y2)
        w.case = "dendrite-whole"
        far = max(hausdorff_distance(G, S, Subcontinuum.whole(G)) for S in w.members)
        if far >= eps:
            raise InsufficientResolution("members leave the eps-ball around X", required=T.depth + 1)
        return w
    raise InputError("case must be 1, 2 or 3")


# ---------------------------------------------------------------------------
# monotone separation sequences and arcs of members
# ---------------------------------------------------------------------------

def separation_sequences(T: MetricGraph, p: GraphPoint, q: GraphPoint, N: int):
    """Closures of the ``p``-side and ``q``-side of ``X \\ {p_n}`` for ordinary ``p_n`` tending to ``q``.

    The ``p_n`` sit on the last edge of the arc ``pq`` at distances
    ``len / 2^n`` from ``q``.
    """
    path = geodesic_segment(T, p, q)
    last = None
    for eid, end in (T.incidences[q.id] if isinstance(q, Node) else [(q.edge, None)]):
        if path.contains(T.point(eid, Fraction(1, 2))):
            last = (eid, end)
    if last is None:
        raise InputError("q must be a node reached through an edge of pq")
    eid, end = last
    near, far = [], []
    for n in range(1, N + 1):
        s = Fraction(1, 2 ** n)
        pn = T.point(eid, s if end == 0 else 1 - s)
        near.append(remove_component(T, pn, q))  # closure of the p-side
        far.append(remove_component(T, pn, p))  # closure of the q-side
    return near, far


@dataclass
class ArcWitness:
    edge: str
    params: list
    members: list
    max_gap: Fraction
    injective: bool
    proxy: str = TOTALLY_DISCONNECTED_PROXY

    def to_dict(self) -> dict:
        return {
            "edge": self.edge,
            "parameters": [render(t) for t in self.params],
            "members": [S.to_dict() for S in self.members],
            "max_gap": render(self.max_gap),
            "injective": self.injective,
            "proxy": self.proxy,
        }


def arc_in_ncstar_witness(T: MetricGraph, edge: str | None = None, samples: int = 32,
                          lo=Fraction(1, 4), hi=Fraction(3, 4)) -> ArcWitness:
    """Members ``alpha(x) = U_x + {x}`` for ``x`` in the sub-arc ``[lo, hi]`` of ``edge``.

    ``U_x`` is the component of ``X \\ {x}`` on the anchor side of the edge
    (an endpoint end when there is one, else the tail), so the chain is an
    arc inside NC*(T).
    """
    if not T.is_tree:
        raise DomainError("expected a tree")
    eid = edge if edge is not None else T.edges[0].id
    e = T.edge(eid)
    lo, hi = Fraction(lo), Fraction(hi)
    if not 0 < lo < hi < 1 or samples < 2:
        raise InputError("need 0 < lo < hi < 1 and at least two samples")
    params = [lo + (hi - lo) * j / (samples - 1) for j in range(samples)]
    # alpha(x) keeps the side of x holding the anchor: an endpoint end of the edge if any
    tail_free = T.degree(e.tail) == 1 or T.degree(e.head) != 1
    far = Node(e.head if tail_free else e.tail)
    members = [remove_component(T, T.point(eid, t), far) for t in params]
    gaps = [hausdorff_distance(T, x, y) for x, y in zip(members, members[1:])]
    return ArcWitness(eid, params, members, max(gaps), len(set(members)) == len(members))
