"""Metric finite graphs with exact rational edge lengths.

A :class:`MetricGraph` is a connected multigraph whose edges carry positive
rational lengths. Points are either combinatorial nodes (:class:`Node`) or
interior edge points (:class:`Interior`) at a rational fraction ``t`` of the
edge measured from its tail. Loops and parallel edges are allowed; nodes of
degree two are allowed too, the topological vertex set is computed.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

from .errors import InputError

ONE = Fraction(1)
ZERO = Fraction(0)


def rational(value) -> Fraction:
    """Parse ``value`` ("p/q", int, decimal string or Fraction) exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not a rational: {value!r}")


def render(q: Fraction) -> str:
    """Canonical text form: ``"3/4"`` or ``"2"``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class Node:
    id: str

    def __str__(self):
        return self.id


@dataclass(frozen=True, order=True)
class Interior:
    edge: str
    t: Fraction

    def __post_init__(self):
        if not (0 < self.t < 1):
            raise InputError(f"interior offset must lie in (0, 1), got {self.t}")

    def __str__(self):
        return f"{self.edge}@{render(self.t)}"


GraphPoint = Union[Node, Interior]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction = ONE

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def end_node(self, end: int) -> str:
        return self.tail if end == 0 else self.head


@dataclass(frozen=True)
class Chain:
    """A topological edge: a maximal path whose inner nodes have degree 2.

    ``steps`` lists ``(edge id, forward)`` pairs walked from ``start`` to
    ``end``. A chain with ``start == end`` is a closed curve (a loop when it
    carries at most one ramification point).
    """

    start: str
    end: str
    steps: tuple
    length: Fraction

    @property
    def closed(self) -> bool:
        return self.start == self.end

    def offsets(self, graph: "MetricGraph"):
        """Yield ``(edge id, forward, offset of the step start, edge length)``."""
        s = ZERO
        for eid, forward in self.steps:
            ln = graph.edge(eid).length
            yield eid, forward, s, ln
            s += ln

    def point_at(self, graph: "MetricGraph", s) -> GraphPoint:
        """The point at arclength ``s`` from ``start``."""
        s = Fraction(s)
        if s < 0 or s > self.length:
            raise InputError(f"arclength {s} outside [0, {self.length}]")
        if s == 0:
            return Node(self.start)
        if s == self.length:
            return Node(self.end)
        for eid, forward, off, ln in self.offsets(graph):
            if s <= off + ln:
                frac = (s - off) / ln
                return graph.point(eid, frac if forward else 1 - frac)
        raise AssertionError("unreachable")

    def positions(self, graph: "MetricGraph", p: GraphPoint) -> list:
        """Arclength positions of ``p`` along the chain (empty if absent)."""
        out = []
        if isinstance(p, Node):
            if p.id == self.start:
                out.append(ZERO)
            off = ZERO
            for eid, forward, off, ln in self.offsets(graph):
                e = graph.edge(eid)
                far = e.head if forward else e.tail
                if far == p.id:
                    out.append(off + ln)
            return sorted(set(out))
        for eid, forward, off, ln in self.offsets(graph):
            if eid == p.edge:
                out.append(off + (p.t if forward else 1 - p.t) * ln)
        return out


@dataclass(frozen=True)
class MetricGraph:
    nodes: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.edges:
            raise InputError("a metric graph needs at least one edge")
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("duplicate node ids")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate edge ids")
        known = set(self.nodes)
        for e in self.edges:
            if e.tail not in known or e.head not in known:
                raise InputError(f"edge {e.id} references an unknown node")
            if not e.length > 0:
                raise InputError(f"edge {e.id} has non-positive length")
        if not self._is_connected():
            raise InputError("the underlying multigraph is not connected")

    # -- construction ---------------------------------------------------
    @classmethod
    def build(cls, edges: Iterable, nodes: Iterable = None) -> "MetricGraph":
        """Build from ``(id, tail, head[, length])`` tuples."""
        built = []
        for spec in edges:
            eid, tail, head, *rest = spec
            built.append(Edge(str(eid), str(tail), str(head), rational(rest[0]) if rest else ONE))
        if nodes is None:
            seen = {}
            for e in built:
                seen.setdefault(e.tail, None)
                seen.setdefault(e.head, None)
            nodes = list(seen)
        return cls(tuple(str(v) for v in nodes), tuple(built))

    @classmethod
    def from_dict(cls, data: dict) -> "MetricGraph":
        try:
            nodes = [str(v) for v in data["nodes"]]
            edges = [
                Edge(str(e["id"]), str(e["from"]), str(e["to"]), rational(e.get("length", 1)))
                for e in data["edges"]
            ]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed graph document: {exc}") from exc
        return cls(tuple(nodes), tuple(edges))

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [
                {"id": e.id, "from": e.tail, "to": e.head, "length": render(e.length)}
                for e in self.edges
            ],
        }

    # -- lookups ---------------------------------------------------------
    @cached_property
    def _edge_map(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def _edge_index(self) -> dict:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def incidences(self) -> dict:
        """node -> list of ``(edge id, end)``; a loop contributes both ends."""
        inc = {v: [] for v in self.nodes}
        for e in self.edges:
            inc[e.tail].append((e.id, 0))
            inc[e.head].append((e.id, 1))
        return inc

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_map[eid]
        except KeyError:
            raise InputError(f"unknown edge {eid!r}") from None

    def edge_order(self, eid: str) -> int:
        return self._edge_index[eid]

    def has_node(self, v: str) -> bool:
        return v in self.incidences

    def degree(self, v: str) -> int:
        try:
            return len(self.incidences[v])
        except KeyError:
            raise InputError(f"unknown node {v!r}") from None

    def point(self, eid: str, t) -> GraphPoint:
        """Canonical point at fraction ``t`` of edge ``eid``."""
        e = self.edge(eid)
        t = rational(t)
        if t < 0 or t > 1:
            raise InputError(f"offset {t} outside [0, 1]")
        if t == 0:
            return Node(e.tail)
        if t == 1:
            return Node(e.head)
        return Interior(eid, t)

    def check_point(self, p: GraphPoint) -> GraphPoint:
        if isinstance(p, Node):
            self.degree(p.id)
        elif isinstance(p, Interior):
            self.edge(p.edge)
        else:
            raise InputError(f"not a graph point: {p!r}")
        return p

    def _is_connected(self) -> bool:
        adj = {v: set() for v in self.nodes}
        for e in self.edges:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
        start = self.nodes[0]
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    # -- topology ----------------------------------------------------------
    def order(self, p: GraphPoint) -> int:
        """Menger-Urysohn order; loops count twice at their node."""
        self.check_point(p)
        return 2 if isinstance(p, Interior) else self.degree(p.id)

    @cached_property
    def endpoints(self) -> tuple:
        return tuple(v for v in self.nodes if self.degree(v) == 1)

    @cached_property
    def ramification_nodes(self) -> tuple:
        return tuple(v for v in self.nodes if self.degree(v) >= 3)

    @cached_property
    def vertices(self) -> tuple:
        """Topological vertices: nodes of order different from 2."""
        return tuple(v for v in self.nodes if self.degree(v) != 2)

    @property
    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.nodes) + 1

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), ZERO)

    def classify(self) -> str:
        """One of ``"Arc"``, ``"Circle"``, ``"Tree"``, ``"GeneralGraph"``."""
        if self.cycle_rank == 0:
            return "Arc" if not self.ramification_nodes else "Tree"
        if self.cycle_rank == 1 and all(self.degree(v) == 2 for v in self.nodes):
            return "Circle"
        return "GeneralGraph"

    @property
    def is_tree(self) -> bool:
        return self.cycle_rank == 0

    @cached_property
    def chains(self) -> tuple:
        """The topological edges, in deterministic order."""
        used = set()
        chains = []
        starts = [v for v in self.nodes if self.degree(v) != 2]
        for v in starts:
            for eid, end in self.incidences[v]:
                if (eid, end) in used:
                    continue
                chains.append(self._walk(v, eid, end, used))
        # components of degree-2 nodes only: a bare circle
        for e in self.edges:
            if (e.id, 0) not in used:
                chains.append(self._walk(e.tail, e.id, 0, used))
        return tuple(chains)

    def _walk(self, v, eid, end, used) -> Chain:
        steps = []
        length = ZERO
        start = v
        while True:
            e = self.edge(eid)
            used.add((eid, end))
            used.add((eid, 1 - end))
            steps.append((eid, end == 0))
            length += e.length
            w = e.end_node(1 - end)
            if self.degree(w) != 2 or w == start:
                return Chain(start, w, tuple(steps), length)
            nxt = [(f, fe) for f, fe in self.incidences[w] if (f, fe) != (eid, 1 - end)]
            eid, end = nxt[0]

    def chain_of(self, eid: str) -> Chain:
        for c in self.chains:
            if any(s[0] == eid for s in c.steps):
                return c
        raise InputError(f"unknown edge {eid!r}")

    def hairs(self) -> list:
        """Chains joining an endpoint to a ramification point, oriented from the endpoint."""
        out = []
        for c in self.chains:
            a, b = self.degree(c.start), self.degree(c.end)
            if a == 1 and b >= 3:
                out.append(c)
            elif b == 1 and a >= 3:
                out.append(reverse_chain(self, c))
        return out

    def loops(self) -> list:
        """Closed chains through at most one ramification point."""
        return [c for c in self.chains if c.closed and self.degree(c.start) >= 3]

    def internal_chains(self) -> list:
        return [
            c for c in self.chains
            if not c.closed and self.degree(c.start) >= 3 and self.degree(c.end) >= 3
        ]

    # -- metric ------------------------------------------------------------
    @cached_property
    def _adjacency(self) -> dict:
        adj = {v: [] for v in self.nodes}
        for e in self.edges:
            if not e.is_loop:
                adj[e.tail].append((e.head, e.length))
                adj[e.head].append((e.tail, e.length))
        return adj

    def distances_from(self, src: str) -> dict:
        """Exact single-source node distances (Dijkstra)."""
        if "node_distances" in self.__dict__:
            return self.node_distances[src]
        return self.distances_from_seeds({src: ZERO})

    def distances_from_seeds(self, seeds: dict) -> dict:
        """``min over seeds u of (offset_u + d(u, v))`` for every reachable node ``v``."""
        adj = self._adjacency
        dist = dict(seeds)
        heap = [(d, i, v) for i, (v, d) in enumerate(sorted(seeds.items()))]
        heapq.heapify(heap)
        tick = len(heap)
        while heap:
            d, _, v = heapq.heappop(heap)
            if d > dist[v]:
                continue
            for w, ln in adj[v]:
                nd = d + ln
                if w not in dist or nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, tick, w))
                    tick += 1
        return dist

    @cached_property
    def node_distances(self) -> dict:
        """All-pairs node distances."""
        return {src: self.distances_from(src) for src in self.nodes}

    def portals(self, p: GraphPoint) -> list:
        """``(node, distance along the edge)`` exits from ``p``."""
        if isinstance(p, Node):
            return [(p.id, ZERO)]
        e = self.edge(p.edge)
        return [(e.tail, p.t * e.length), (e.head, (1 - p.t) * e.length)]

    def distance(self, p: GraphPoint, q: GraphPoint) -> Fraction:
        """Geodesic (shortest path) distance."""
        self.check_point(p)
        self.check_point(q)
        if p == q:
            return ZERO
        best = None
        if isinstance(p, Interior) and isinstance(q, Interior) and p.edge == q.edge:
            best = abs(p.t - q.t) * self.edge(p.edge).length
        nd = self.node_distances
        for u, du in self.portals(p):
            for w, dw in self.portals(q):
                d = du + nd[u][w] + dw
                if best is None or d < best:
                    best = d
        return best

    @cached_property
    def diameter_bound(self) -> Fraction:
        return self.total_length

    # -- refinement --------------------------------------------------------
    def subdivide(self, k: int) -> "Subdivision":
        if not isinstance(k, int) or k < 1:
            raise InputError("subdivision factor must be a positive integer")
        return Subdivision(self, k)


def reverse_chain(graph: MetricGraph, c: Chain) -> Chain:
    return Chain(c.end, c.start, tuple((eid, not fw) for eid, fw in reversed(c.steps)), c.length)


@dataclass(frozen=True)
class Subdivision:
    """``coarse`` with every edge cut into ``k`` equal pieces, plus coordinate maps.

    Fine node ids: original ids, and ``"<edge>#<j>"`` for the j-th inner cut
    point; fine edge ids ``"<edge>#<j>:"`` for ``j = 0..k-1``.
    """

    coarse: MetricGraph
    k: int
    fine: MetricGraph = field(init=False, repr=False)

    def __post_init__(self):
        nodes = list(self.coarse.nodes)
        edges = []
        for e in self.coarse.edges:
            cuts = [e.tail] + [f"{e.id}#{j}" for j in range(1, self.k)] + [e.head]
            nodes.extend(cuts[1:-1])
            for j in range(self.k):
                edges.append(Edge(self.fine_edge(e.id, j), cuts[j], cuts[j + 1], e.length / self.k))
        object.__setattr__(self, "fine", MetricGraph(tuple(nodes), tuple(edges)))

    @staticmethod
    def fine_edge(eid: str, j: int) -> str:
        return f"{eid}#{j}:"

    def fine_node(self, eid: str, j: int) -> str:
        e = self.coarse.edge(eid)
        if j == 0:
            return e.tail
        if j == self.k:
            return e.head
        return f"{eid}#{j}"

    def segment_of(self, fine_eid: str):
        """Coarse ``(edge id, j)`` for a fine edge id."""
        base, j = fine_eid[:-1].rsplit("#", 1)
        return base, int(j)

    def to_fine(self, p: GraphPoint) -> GraphPoint:
        self.coarse.check_point(p)
        if isinstance(p, Node):
            return p
        x = p.t * self.k
        j = int(x)  # floor for positive rationals
        frac = x - j
        if frac == 0:
            return Node(self.fine_node(p.edge, j))
        return Interior(self.fine_edge(p.edge, j), frac)

    def to_coarse(self, p: GraphPoint) -> GraphPoint:
        self.fine.check_point(p)
        if isinstance(p, Node):
            if "#" in p.id and not self.coarse.has_node(p.id):
                base, j = p.id.rsplit("#", 1)
                return self.coarse.point(base, Fraction(int(j), self.k))
            return p
        base, j = self.segment_of(p.edge)
        return self.coarse.point(base, (j + p.t) / self.k)
