"""Exact subcontinua of a metric graph.

A :class:`Subcontinuum` is stored as its *closed trace* on every edge: the
intersection of the set with the closed edge ``[0, 1]``, as sorted disjoint
closed intervals. A node belongs to the set iff its end of every incident
edge is covered, so the trace is a canonical form and equality of sets is
equality of traces.

:class:`PointSet` is the general (not necessarily closed or connected)
counterpart used for open regions, Vietoris sets and set identities.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import DomainError, InputError
from .metric_graph import ONE, ZERO, GraphPoint, Interior, MetricGraph, Node, rational, render


def merge_intervals(intervals) -> tuple:
    """Sort and merge closed intervals; touching intervals are joined."""
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


class _DSU:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def _canonical_traces(graph: MetricGraph, raw: dict) -> dict:
    traces = {}
    for eid, ivs in raw.items():
        graph.edge(eid)
        clean = []
        for a, b in ivs:
            a, b = rational(a), rational(b)
            if not (0 <= a <= b <= 1):
                raise InputError(f"bad interval [{a}, {b}] on edge {eid}")
            clean.append((a, b))
        if clean:
            traces[eid] = list(merge_intervals(clean))
    nodes = set()
    for eid, ivs in traces.items():
        e = graph.edge(eid)
        if ivs[0][0] == 0:
            nodes.add(e.tail)
        if ivs[-1][1] == 1:
            nodes.add(e.head)
    for v in nodes:
        for eid, end in graph.incidences[v]:
            traces.setdefault(eid, []).append((ZERO, ZERO) if end == 0 else (ONE, ONE))
    return {eid: merge_intervals(ivs) for eid, ivs in traces.items()}


def _trace_components(graph: MetricGraph, traces: dict) -> int:
    dsu = _DSU()
    for eid, ivs in traces.items():
        e = graph.edge(eid)
        for i, (a, b) in enumerate(ivs):
            dsu.add((eid, i))
            if a == 0:
                dsu.add(("node", e.tail))
                dsu.union((eid, i), ("node", e.tail))
            if b == 1:
                dsu.add(("node", e.head))
                dsu.union((eid, i), ("node", e.head))
    return len(dsu.groups())


def is_connected(graph: MetricGraph, intervals: dict) -> bool:
    """Whether the closed set described by per-edge intervals is connected."""
    traces = _canonical_traces(graph, intervals)
    if not traces:
        raise InputError("empty set")
    return _trace_components(graph, traces) == 1


class Subcontinuum:
    """A nonempty closed connected subset of ``graph`` (canonical closed traces)."""

    __slots__ = ("graph", "traces", "_key", "__dict__")

    def __init__(self, graph: MetricGraph, intervals: dict, *, _canonical=False):
        traces = intervals if _canonical else _canonical_traces(graph, intervals)
        if not traces:
            raise InputError("a subcontinuum must be nonempty")
        if not _canonical and _trace_components(graph, traces) != 1:
            raise InputError("intervals do not form a connected set")
        self.graph = graph
        self.traces = traces
        self._key = tuple(sorted(((graph.edge_order(e), ivs) for e, ivs in traces.items())))

    # -- constructors ------------------------------------------------------
    @classmethod
    def whole(cls, graph: MetricGraph) -> "Subcontinuum":
        return cls(graph, {e.id: [(ZERO, ONE)] for e in graph.edges})

    @classmethod
    def point(cls, graph: MetricGraph, p: GraphPoint) -> "Subcontinuum":
        graph.check_point(p)
        if isinstance(p, Node):
            eid, end = graph.incidences[p.id][0]
            x = ZERO if end == 0 else ONE
            return cls(graph, {eid: [(x, x)]})
        return cls(graph, {p.edge: [(p.t, p.t)]})

    @classmethod
    def from_dict(cls, graph: MetricGraph, data: dict) -> "Subcontinuum":
        try:
            raw = data["edge_intervals"]
            return cls(graph, {eid: [tuple(iv) for iv in ivs] for eid, ivs in raw.items()})
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed subcontinuum document: {exc}") from exc

    def to_dict(self) -> dict:
        from .metric_graph import render

        return {
            "edge_intervals": {
                eid: [[render(a), render(b)] for a, b in ivs]
                for eid, ivs in sorted(self.traces.items(), key=lambda kv: self.graph.edge_order(kv[0]))
            }
        }

    # -- basic queries -----------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Subcontinuum) and self._key == other._key and (self.graph is other.graph or self.graph == other.graph)

    def __hash__(self):
        return hash(self._key)

    @property
    def key(self):
        return self._key

    def __repr__(self):
        p = self.single_point
        if p is not None:
            return f"Subcontinuum({{{p}}})"
        parts = []
        for eid, ivs in sorted(self.traces.items(), key=lambda kv: self.graph.edge_order(kv[0])):
            parts.append(eid + ":" + ",".join(f"[{a},{b}]" for a, b in ivs))
        return f"Subcontinuum({' '.join(parts)})"

    @cached_property
    def nodes(self) -> frozenset:
        out = set()
        for eid, ivs in self.traces.items():
            e = self.graph.edge(eid)
            if ivs[0][0] == 0:
                out.add(e.tail)
            if ivs[-1][1] == 1:
                out.add(e.head)
        return frozenset(out)

    def contains(self, p: GraphPoint) -> bool:
        if isinstance(p, Node):
            return p.id in self.nodes
        return any(a <= p.t <= b for a, b in self.traces.get(p.edge, ()))

    __contains__ = contains

    @cached_property
    def is_whole(self) -> bool:
        return all(self.traces.get(e.id) == ((ZERO, ONE),) for e in self.graph.edges)

    @cached_property
    def single_point(self):
        """The point if the set is degenerate, else ``None``."""
        if self.nodes:
            if len(self.nodes) == 1 and all(a == b for ivs in self.traces.values() for a, b in ivs):
                return Node(next(iter(self.nodes)))
            return None
        if len(self.traces) == 1:
            (eid, ivs), = self.traces.items()
            if len(ivs) == 1 and ivs[0][0] == ivs[0][1]:
                return Interior(eid, ivs[0][0])
        return None

    def measure(self) -> Fraction:
        return sum(((b - a) * self.graph.edge(eid).length
                    for eid, ivs in self.traces.items() for a, b in ivs), ZERO)

    def issubset(self, other: "Subcontinuum") -> bool:
        for eid, ivs in self.traces.items():
            theirs = other.traces.get(eid, ())
            for a, b in ivs:
                if not any(c <= a and b <= d for c, d in theirs):
                    return False
        return True

    def __le__(self, other):
        return self.issubset(other)

    def union(self, other: "Subcontinuum") -> "Subcontinuum":
        raw = {eid: list(ivs) for eid, ivs in self.traces.items()}
        for eid, ivs in other.traces.items():
            raw.setdefault(eid, []).extend(ivs)
        return Subcontinuum(self.graph, raw)

    def intersects(self, other: "Subcontinuum") -> bool:
        for eid, ivs in self.traces.items():
            for a, b in ivs:
                for c, d in other.traces.get(eid, ()):
                    if a <= d and c <= b:
                        return True
        return False

    def to_pointset(self) -> "PointSet":
        segs = {}
        for eid, ivs in self.traces.items():
            out = []
            for a, b in ivs:
                if a == b and a in (0, 1):
                    continue
                lo_c, hi_c = a > 0, b < 1
                out.append((a, b, lo_c, hi_c))
            if out:
                segs[eid] = tuple(out)
        return PointSet(self.graph, self.nodes, segs)


# ---------------------------------------------------------------------------
# general point sets
# ---------------------------------------------------------------------------

def _seg_contains(seg, x) -> bool:
    lo, hi, lc, hc = seg
    if lo < x < hi:
        return True
    return (x == lo and lc) or (x == hi and hc)


def _normalize_segments(pieces) -> tuple:
    """Merge elementary pieces ``(lo, hi, lo_closed, hi_closed)`` into maximal segments."""
    out = []
    for seg in sorted(pieces, key=lambda s: (s[0], not s[2], s[1])):
        if out:
            lo, hi, lc, hc = out[-1]
            if seg[0] < hi or (seg[0] == hi and (hc or seg[2])):
                if seg[1] > hi or (seg[1] == hi and seg[3] and not hc):
                    out[-1] = (lo, seg[1], lc, seg[3] if seg[1] > hi else (hc or seg[3]))
                continue
        out.append(seg)
    return tuple(out)


@dataclass(frozen=True)
class PointSet:
    """Arbitrary finite union of points and intervals.

    ``nodes`` holds the member nodes; ``segments`` maps an edge id to sorted
    disjoint intervals ``(lo, hi, lo_closed, hi_closed)`` inside the open edge
    ``(0, 1)`` (so an endpoint ``0``/``1`` is never closed there).
    """

    graph: MetricGraph
    nodes: frozenset
    segments: dict

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        segs = {e: _normalize_segments(s) for e, s in self.segments.items() if s}
        object.__setattr__(self, "segments", {e: s for e, s in segs.items() if s})

    @classmethod
    def empty(cls, graph):
        return cls(graph, frozenset(), {})

    @classmethod
    def whole(cls, graph):
        return cls(graph, frozenset(graph.nodes),
                   {e.id: ((ZERO, ONE, False, False),) for e in graph.edges})

    @classmethod
    def of_points(cls, graph, points):
        nodes, segs = set(), {}
        for p in points:
            graph.check_point(p)
            if isinstance(p, Node):
                nodes.add(p.id)
            else:
                segs.setdefault(p.edge, []).append((p.t, p.t, True, True))
        return cls(graph, nodes, segs)

    def _key(self):
        return (self.nodes, tuple(sorted(self.segments.items())))

    def __eq__(self, other):
        return isinstance(other, PointSet) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def contains(self, p: GraphPoint) -> bool:
        if isinstance(p, Node):
            return p.id in self.nodes
        return any(_seg_contains(s, p.t) for s in self.segments.get(p.edge, ()))

    __contains__ = contains

    def is_empty(self) -> bool:
        return not self.nodes and not self.segments

    def _combine(self, other: "PointSet", op) -> "PointSet":
        nodes = {v for v in self.graph.nodes if op(v in self.nodes, v in other.nodes)}
        segs = {}
        for eid in set(self.segments) | set(other.segments):
            mine, theirs = self.segments.get(eid, ()), other.segments.get(eid, ())
            cuts = {ZERO, ONE}
            for s in mine + theirs:
                cuts.update((s[0], s[1]))
            cuts = sorted(cuts)
            pieces = []
            for i, x in enumerate(cuts):
                if 0 < x < 1 and op(any(_seg_contains(s, x) for s in mine),
                                    any(_seg_contains(s, x) for s in theirs)):
                    pieces.append((x, x, True, True))
                if i + 1 < len(cuts):
                    m = (x + cuts[i + 1]) / 2
                    if op(any(_seg_contains(s, m) for s in mine), any(_seg_contains(s, m) for s in theirs)):
                        pieces.append((x, cuts[i + 1], False, False))
            segs[eid] = pieces
        return PointSet(self.graph, nodes, segs)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def issubset(self, other) -> bool:
        return (self - other).is_empty()

    __le__ = issubset

    def __lt__(self, other):
        return self.issubset(other) and self != other

    def intersects(self, other) -> bool:
        return not (self & other).is_empty()

    def complement(self) -> "PointSet":
        return PointSet.whole(self.graph) - self

    def closure(self) -> "PointSet":
        nodes = set(self.nodes)
        segs = {}
        for eid, ss in self.segments.items():
            e = self.graph.edge(eid)
            out = []
            for lo, hi, _, _ in ss:
                if lo == 0:
                    nodes.add(e.tail)
                if hi == 1:
                    nodes.add(e.head)
                out.append((lo, hi, lo > 0, hi < 1))
            segs[eid] = out
        return PointSet(self.graph, nodes, segs)

    def is_closed(self) -> bool:
        return self.closure() == self

    def to_subcontinuum(self) -> Subcontinuum:
        if not self.is_closed():
            raise DomainError("point set is not closed")
        raw = {}
        for eid, ss in self.segments.items():
            raw[eid] = [(lo, hi) for lo, hi, _, _ in ss]
        for v in self.nodes:
            eid, end = self.graph.incidences[v][0]
            x = ZERO if end == 0 else ONE
            raw.setdefault(eid, []).append((x, x))
        return Subcontinuum(self.graph, raw)


# ---------------------------------------------------------------------------
# complements, boundary, non-cut predicate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpenRegion:
    """A component of the complement of a subcontinuum: open intervals plus nodes."""

    graph: MetricGraph
    nodes: frozenset
    pieces: dict  # edge id -> tuple of open intervals (lo, hi)

    def contains(self, p: GraphPoint) -> bool:
        if isinstance(p, Node):
            return p.id in self.nodes
        return any(lo < p.t < hi for lo, hi in self.pieces.get(p.edge, ()))

    __contains__ = contains

    def to_pointset(self) -> PointSet:
        return PointSet(self.graph, self.nodes,
                        {e: [(lo, hi, False, False) for lo, hi in iv] for e, iv in self.pieces.items()})

    def sort_key(self):
        firsts = [(self.graph.edge_order(e), iv[0][0]) for e, iv in self.pieces.items()]
        return min(firsts)


def _gaps(ivs) -> list:
    """Open gaps ``(lo, hi, at_tail, at_head)`` of ``[0, 1]`` minus the closed intervals ``ivs``.

    The flags tell whether the gap reaches an uncovered edge end.
    """
    if not ivs:
        return [(ZERO, ONE, True, True)]
    out = []
    if ivs[0][0] > 0:
        out.append((ZERO, ivs[0][0], True, False))
    for (_, b), (c, _) in zip(ivs, ivs[1:]):
        out.append((b, c, False, False))
    if ivs[-1][1] < 1:
        out.append((ivs[-1][1], ONE, False, True))
    return out


def complement_components(graph: MetricGraph, S: Subcontinuum) -> list:
    """The components of ``X \\ S`` in deterministic order (empty iff ``S = X``)."""
    dsu = _DSU()
    gaps = {}
    for e in graph.edges:
        ivs = S.traces.get(e.id, ())
        for i, (lo, hi, at_tail, at_head) in enumerate(_gaps(ivs)):
            gaps[(e.id, i)] = (lo, hi)
            dsu.add((e.id, i))
            if at_tail:
                dsu.add(("node", e.tail))
                dsu.union((e.id, i), ("node", e.tail))
            if at_head:
                dsu.add(("node", e.head))
                dsu.union((e.id, i), ("node", e.head))
    regions = []
    for group in dsu.groups():
        nodes = frozenset(x[1] for x in group if x[0] == "node")
        pieces = {}
        for x in group:
            if x[0] != "node":
                pieces.setdefault(x[0], []).append(gaps[x])
        regions.append(OpenRegion(graph, nodes, {e: tuple(sorted(v)) for e, v in pieces.items()}))
    regions.sort(key=OpenRegion.sort_key)
    return regions


def is_noncut(graph: MetricGraph, S: Subcontinuum) -> bool:
    """``X \\ S`` is connected (the empty complement counts as connected)."""
    return len(complement_components(graph, S)) <= 1


def complement_of_region(graph: MetricGraph, region: OpenRegion) -> Subcontinuum:
    """``X`` minus an open region (closed; connectedness is checked)."""
    raw = {}
    for e in graph.edges:
        gaps = region.pieces.get(e.id, ())
        ivs = []
        cur = ZERO
        for lo, hi in gaps:
            if lo >= cur:
                ivs.append((cur, lo))
            cur = hi
        ivs.append((cur, ONE))
        keep = []
        for a, b in ivs:
            if a == b == 0 and e.tail in region.nodes:
                continue
            if a == b == 1 and e.head in region.nodes:
                continue
            keep.append((a, b))
        if keep:
            raw[e.id] = keep
    return Subcontinuum(graph, raw)


def remove_component(graph: MetricGraph, p: GraphPoint, q: GraphPoint) -> Subcontinuum:
    """``X \\ C`` where ``C`` is the component of ``X \\ {p}`` containing ``q``."""
    if p == q:
        raise InputError("the reference point must differ from the cut point")
    for region in complement_components(graph, Subcontinuum.point(graph, p)):
        if region.contains(q):
            return complement_of_region(graph, region)
    raise InputError(f"{q} does not lie on the graph")


def component_containing(graph: MetricGraph, p: GraphPoint, q: GraphPoint) -> OpenRegion:
    for region in complement_components(graph, Subcontinuum.point(graph, p)):
        if region.contains(q):
            return region
    raise InputError(f"{q} does not lie on the graph")


def boundary(graph: MetricGraph, S: Subcontinuum) -> set:
    """Topological boundary of ``S`` in ``X``."""
    out = set()
    for eid, ivs in S.traces.items():
        for a, b in ivs:
            if 0 < a < 1:
                out.add(Interior(eid, a))
            if 0 < b < 1:
                out.add(Interior(eid, b))
    for v in S.nodes:
        for eid, end in graph.incidences[v]:
            ivs = S.traces[eid]
            if end == 0 and not (ivs[0][0] == 0 and ivs[0][1] > 0):
                out.add(Node(v))
            if end == 1 and not (ivs[-1][1] == 1 and ivs[-1][0] < 1):
                out.add(Node(v))
    return out


# ---------------------------------------------------------------------------
# paths and convex hulls
# ---------------------------------------------------------------------------

def _node_path(graph: MetricGraph, u: str, w: str) -> list:
    """Edge ids of a shortest node path ``u -> w`` (smallest edge order on ties)."""
    dist = graph.node_distances[u]
    path = []
    cur = w
    while cur != u:
        best = None
        for eid, end in graph.incidences[cur]:
            e = graph.edge(eid)
            if e.is_loop:
                continue
            prev = e.end_node(1 - end)
            if dist[prev] + e.length == dist[cur]:
                cand = (graph.edge_order(eid), eid, prev)
                if best is None or cand < best:
                    best = cand
        path.append(best[1])
        cur = best[2]
    return path[::-1]


def geodesic_segment(graph: MetricGraph, p: GraphPoint, q: GraphPoint) -> Subcontinuum:
    """A shortest arc from ``p`` to ``q`` (the unique arc in a tree)."""
    graph.check_point(p)
    graph.check_point(q)
    if p == q:
        return Subcontinuum.point(graph, p)
    target = graph.distance(p, q)
    if isinstance(p, Interior) and isinstance(q, Interior) and p.edge == q.edge:
        if abs(p.t - q.t) * graph.edge(p.edge).length == target:
            return Subcontinuum(graph, {p.edge: [(min(p.t, q.t), max(p.t, q.t))]})
    nd = graph.node_distances
    combos = [
        (pu, qw, u, du, w, dw)
        for pu, (u, du) in enumerate(graph.portals(p))
        for qw, (w, dw) in enumerate(graph.portals(q))
    ]
    for pu, qw, u, du, w, dw in combos:
        if du + nd[u][w] + dw != target:
            continue
        raw = {}
        for pt, side in ((p, pu), (q, qw)):
            if isinstance(pt, Interior):
                raw.setdefault(pt.edge, []).append((ZERO, pt.t) if side == 0 else (pt.t, ONE))
        for eid in _node_path(graph, u, w):
            raw.setdefault(eid, []).append((ZERO, ONE))
        if not raw:
            return Subcontinuum.point(graph, Node(u))
        return Subcontinuum(graph, raw)
    raise AssertionError("no geodesic found")


def convex_hull(graph: MetricGraph, points) -> Subcontinuum:
    """Smallest subcontinuum of a tree containing ``points``."""
    if not graph.is_tree:
        raise DomainError("convex hull is defined here for trees only")
    points = list(points)
    if not points:
        raise InputError("need at least one point")
    hull = Subcontinuum.point(graph, points[0])
    for q in points[1:]:
        hull = hull.union(geodesic_segment(graph, points[0], q))
    return hull


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------

def node_distances_to(graph: MetricGraph, S: Subcontinuum) -> dict:
    """``d(v, S)`` for every node ``v``."""
    seeds = {}
    for eid, ivs in S.traces.items():
        e = graph.edge(eid)
        for a, b in ivs:
            for u, off in ((e.tail, a * e.length), (e.head, (1 - b) * e.length)):
                if u not in seeds or off < seeds[u]:
                    seeds[u] = off
    if "node_distances" in graph.__dict__ or len(graph.nodes) <= 64:
        nd = graph.node_distances
        return {v: min(nd[v][u] + off for u, off in seeds.items()) for v in graph.nodes}
    return graph.distances_from_seeds(seeds)


def _edge_profile(graph, eid, S_traces, dn):
    """Data describing ``y -> d(point at arclength y on eid, S)``."""
    e = graph.edge(eid)
    ln = e.length
    own = [(a * ln, b * ln) for a, b in S_traces.get(eid, ())]
    return ln, dn[e.tail], dn[e.head], own


def _profile_value(profile, y):
    ln, dt, dh, own = profile
    best = min(y + dt, ln - y + dh)
    for a, b in own:
        if a <= y <= b:
            return ZERO
        best = min(best, a - y if y < a else y - b)
    return best


def _profile_sup(profile, lo, hi):
    ln, dt, dh, own = profile
    cands = {lo, hi}
    inc = [-dt] + [b for _, b in own]
    dec = [ln + dh] + [a for a, _ in own]
    for a, b in own:
        cands.update((a, b))
    for c in inc:
        for d in dec:
            cands.add((c + d) / 2)
    return max(_profile_value(profile, y) for y in cands if lo <= y <= hi)


def point_distance(graph: MetricGraph, p: GraphPoint, S: Subcontinuum) -> Fraction:
    """``d(p, S)``."""
    graph.check_point(p)
    if S.contains(p):
        return ZERO
    dn = node_distances_to(graph, S)
    if isinstance(p, Node):
        return dn[p.id]
    prof = _edge_profile(graph, p.edge, S.traces, dn)
    return _profile_value(prof, p.t * prof[0])


def directed_hausdorff(graph: MetricGraph, S1: Subcontinuum, S2: Subcontinuum) -> Fraction:
    """``sup_{x in S1} d(x, S2)``."""
    dn = node_distances_to(graph, S2)
    best = ZERO
    for eid, ivs in S1.traces.items():
        prof = _edge_profile(graph, eid, S2.traces, dn)
        for a, b in ivs:
            best = max(best, _profile_sup(prof, a * prof[0], b * prof[0]))
    return best


def hausdorff_distance(graph: MetricGraph, S1: Subcontinuum, S2: Subcontinuum) -> Fraction:
    """Exact Hausdorff distance between two subcontinua of ``graph``."""
    if S1.graph != graph or S2.graph != graph:
        raise InputError("subcontinua live on different graphs")
    if S1 == S2:
        return ZERO
    return max(directed_hausdorff(graph, S1, S2), directed_hausdorff(graph, S2, S1))


# ---------------------------------------------------------------------------
# components of point sets, intrinsic graphs of subcontinua
# ---------------------------------------------------------------------------

def pointset_components(ps: PointSet) -> list:
    """Connected components of an arbitrary point set, in deterministic order."""
    dsu = _DSU()
    for v in ps.nodes:
        dsu.add(("node", v))
    for eid, segs in ps.segments.items():
        e = ps.graph.edge(eid)
        for i, (lo, hi, _, _) in enumerate(segs):
            dsu.add((eid, i))
            if lo == 0 and e.tail in ps.nodes:
                dsu.union((eid, i), ("node", e.tail))
            if hi == 1 and e.head in ps.nodes:
                dsu.union((eid, i), ("node", e.head))
    out = []
    for group in dsu.groups():
        nodes = {x[1] for x in group if x[0] == "node"}
        segs = {}
        for x in group:
            if x[0] != "node":
                segs.setdefault(x[0], []).append(ps.segments[x[0]][x[1]])
        out.append(PointSet(ps.graph, nodes, segs))

    def key(c):
        firsts = [(ps.graph.edge_order(e), s[0][0]) for e, s in c.segments.items()]
        firsts += [(-1, v) for v in c.nodes]
        return min(firsts, key=str)

    out.sort(key=lambda c: str(key(c)))
    return out


@dataclass
class IntrinsicGraph:
    """A nondegenerate subcontinuum ``S`` seen as a metric graph of its own.

    Interval endpoints become nodes named ``"{edge}@{t}"``; graph nodes keep
    their names. ``lift`` maps subcontinua of ``graph`` back into ``S``.
    """

    source: MetricGraph
    subset: Subcontinuum
    graph: MetricGraph
    pieces: dict  # piece edge id -> (source edge id, a, b)

    @classmethod
    def of(cls, graph: MetricGraph, S: Subcontinuum) -> "IntrinsicGraph":
        def name(eid, t):
            p = graph.point(eid, t)
            return p.id if isinstance(p, Node) else f"{eid}@{render(t)}"

        rows, pieces = [], {}
        for eid, ivs in S.traces.items():
            ln = graph.edge(eid).length
            for i, (a, b) in enumerate(ivs):
                if a < b:
                    pid = f"{eid}[{i}]"
                    rows.append((pid, name(eid, a), name(eid, b), (b - a) * ln))
                    pieces[pid] = (eid, a, b)
        if not rows:
            raise DomainError("a single point has no intrinsic graph")
        return cls(graph, S, MetricGraph.build(rows), pieces)

    def to_local(self, p: GraphPoint) -> GraphPoint:
        if isinstance(p, Node) and self.graph.has_node(p.id):
            return p
        t = p.t if isinstance(p, Interior) else None
        for pid, (eid, a, b) in self.pieces.items():
            if isinstance(p, Interior) and p.edge == eid and a <= t <= b:
                return self.graph.point(pid, (t - a) / (b - a))
            if isinstance(p, Node):
                e = self.source.edge(eid)
                if (p.id == e.tail and a == 0) or (p.id == e.head and b == 1):
                    return self.graph.point(pid, ZERO if p.id == e.tail else ONE)
        raise InputError(f"{p} is not in the subcontinuum")

    def lift_point(self, p: GraphPoint) -> GraphPoint:
        if isinstance(p, Node):
            if self.source.has_node(p.id):
                return p
            eid, t = p.id.rsplit("@", 1)
            return self.source.point(eid, rational(t))
        eid, a, b = self.pieces[p.edge]
        return self.source.point(eid, a + p.t * (b - a))

    def lift(self, L: Subcontinuum) -> Subcontinuum:
        raw = {}
        for pid, ivs in L.traces.items():
            eid, a, b = self.pieces[pid]
            raw.setdefault(eid, []).extend((a + x * (b - a), a + y * (b - a)) for x, y in ivs)
        return Subcontinuum(self.source, raw)
