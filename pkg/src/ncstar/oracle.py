"""Brute-force hyperspace of grid subcontinua.

Everything here works on ``subdivide(G, k)``: a *grid subcontinuum* is a
connected union of whole grid segments, or a single grid node. Two
enumerators are provided:

* :func:`enumerate_grid_subcontinua` lists all of them (the discretized
  ``C(X)``) and flags the non-cut ones;
* :func:`sample_ncstar` with ``method="bonds"`` lists only the non-cut ones.
  It uses the graph fact that a bipartition of a connected graph into two
  connected sides is a bond, and a bond of a graph with cycle rank ``c``
  crosses at most ``c + 1`` edges of any spanning tree. The incidence graph
  (grid nodes plus segment midpoints) is split along such cuts and the
  closed side kept.

Hausdorff distances between grid sets are computed exactly in integer units
with numpy; ``GridSpace.scale`` converts back to rationals.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, minimum_spanning_tree, shortest_path

from .errors import BudgetError, InputError
from .metric_graph import MetricGraph, Node
from .subcontinuum import Subcontinuum, hausdorff_distance, is_noncut

DEFAULT_BUDGET = 2_000_000


def element_budget(budget=None) -> int:
    if budget is not None:
        return int(budget)
    return int(os.environ.get("HYP_BUDGET", DEFAULT_BUDGET))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GridSpace:
    """``subdivide(graph, k)`` indexed for vectorized computations."""

    def __init__(self, graph: MetricGraph, k: int):
        self.graph = graph
        self.k = k
        self.sub = graph.subdivide(k)
        fine = self.sub.fine
        self.node_ids = list(fine.nodes)
        self.node_index = {v: i for i, v in enumerate(self.node_ids)}
        self.edge_ids = [e.id for e in fine.edges]
        self.edge_index = {e: i for i, e in enumerate(self.edge_ids)}
        self.eu = np.array([self.node_index[e.tail] for e in fine.edges])
        self.ev = np.array([self.node_index[e.head] for e in fine.edges])
        lcm = 1
        for e in fine.edges:
            lcm = lcm * e.length.denominator // math.gcd(lcm, e.length.denominator)
        self.scale = 2 * lcm  # distances are stored in units of 1/scale
        self.weights = np.array([int(e.length * self.scale) for e in fine.edges], dtype=np.int64)
        self.n_nodes = len(self.node_ids)
        self.n_edges = len(self.edge_ids)

    @cached_property
    def dist(self) -> np.ndarray:
        best = {}
        for i, (u, w) in enumerate(zip(self.eu, self.ev)):
            if u == w:
                continue
            key = (min(u, w), max(u, w))
            best[key] = min(best.get(key, self.weights[i]), self.weights[i])
        rows = [a for a, b in best] + [b for a, b in best]
        cols = [b for a, b in best] + [a for a, b in best]
        vals = list(best.values()) * 2
        mat = coo_matrix((np.array(vals, dtype=float), (rows, cols)), shape=(self.n_nodes,) * 2).tocsr()
        d = shortest_path(mat, method="D", directed=False)
        return np.rint(d).astype(np.int64)

    def to_fraction(self, units) -> Fraction:
        return Fraction(int(units), self.scale)

    @cached_property
    def edge_adjacency(self) -> list:
        """Bitmask of fine edges sharing a node with each fine edge."""
        at_node = [0] * self.n_nodes
        for i, (u, w) in enumerate(zip(self.eu, self.ev)):
            at_node[u] |= 1 << i
            at_node[w] |= 1 << i
        return [(at_node[u] | at_node[w]) & ~(1 << i) for i, (u, w) in enumerate(zip(self.eu, self.ev))]

    @cached_property
    def edges_at_node(self) -> list:
        out = [0] * self.n_nodes
        for i, (u, w) in enumerate(zip(self.eu, self.ev)):
            out[u] |= 1 << i
            out[w] |= 1 << i
        return out

    def closure_nodes(self, edge_mask: int) -> int:
        out = 0
        for i in _bits(edge_mask):
            out |= (1 << int(self.eu[i])) | (1 << int(self.ev[i]))
        return out

    # -- conversions ---------------------------------------------------
    def to_subcontinuum(self, node_mask: int, edge_mask: int) -> Subcontinuum:
        raw = {}
        for i in _bits(edge_mask):
            base, j = self.sub.segment_of(self.edge_ids[i])
            raw.setdefault(base, []).append((Fraction(j, self.k), Fraction(j + 1, self.k)))
        if not raw:
            for v in _bits(node_mask):
                p = self.sub.to_coarse(Node(self.node_ids[v]))
                return Subcontinuum.point(self.graph, p)
        return Subcontinuum(self.graph, raw)

    def from_subcontinuum(self, S: Subcontinuum):
        """``(node mask, edge mask)`` of a grid-representable subcontinuum."""
        nmask = emask = 0
        for eid, ivs in S.traces.items():
            for a, b in ivs:
                lo, hi = a * self.k, b * self.k
                if lo.denominator != 1 or hi.denominator != 1:
                    raise InputError(f"{S} is not representable at resolution {self.k}")
                for j in range(int(lo), int(hi)):
                    emask |= 1 << self.edge_index[self.sub.fine_edge(eid, j)]
                for j in range(int(lo), int(hi) + 1):
                    nmask |= 1 << self.node_index[self.sub.fine_node(eid, j)]
        return nmask, emask

    def masks_to_arrays(self, elements):
        nodes = np.zeros((len(elements), self.n_nodes), dtype=bool)
        edges = np.zeros((len(elements), self.n_edges), dtype=bool)
        for r, (nm, em) in enumerate(elements):
            nodes[r, list(_bits(nm))] = True
            edges[r, list(_bits(em))] = True
        return nodes, edges

    # -- metric --------------------------------------------------------
    def _set_distances(self, node_rows: np.ndarray) -> np.ndarray:
        """``d(v, S)`` for every grid node ``v`` and every set row."""
        out = np.empty((node_rows.shape[0], self.n_nodes), dtype=np.int64)
        for r in range(node_rows.shape[0]):
            out[r] = self.dist[:, node_rows[r]].min(axis=1)
        return out

    def directed_matrix(self, nodes_a, edges_a, nodes_b, edges_b) -> np.ndarray:
        """``D[i, j] = sup_{x in A_i} d(x, B_j)`` in integer units."""
        ds = self._set_distances(nodes_b)
        single = ~edges_a.any(axis=1)
        single_idx = np.array([np.flatnonzero(r)[0] for r in nodes_a[single]], dtype=np.int64)
        out = np.zeros((nodes_a.shape[0], nodes_b.shape[0]), dtype=np.int64)
        for j in range(nodes_b.shape[0]):
            d = ds[j]
            vals = (self.weights + d[self.eu] + d[self.ev]) // 2
            vals[edges_b[j]] = 0
            col = np.where(edges_a, vals[None, :], 0).max(axis=1)
            if single_idx.size:
                col[single] = d[single_idx]
            out[:, j] = col
        return out

    def hausdorff_matrix(self, nodes_a, edges_a, nodes_b=None, edges_b=None) -> np.ndarray:
        if nodes_b is None:
            d = self.directed_matrix(nodes_a, edges_a, nodes_a, edges_a)
            return np.maximum(d, d.T)
        ab = self.directed_matrix(nodes_a, edges_a, nodes_b, edges_b)
        ba = self.directed_matrix(nodes_b, edges_b, nodes_a, edges_a)
        return np.maximum(ab, ba.T)

    def complement_connected(self, node_mask: int, edge_mask: int) -> bool:
        """Whether ``X`` minus the grid set is connected (empty counts as connected)."""
        free_nodes = ((1 << self.n_nodes) - 1) & ~node_mask
        free_edges = ((1 << self.n_edges) - 1) & ~edge_mask
        if not free_edges and not free_nodes:
            return True
        if free_edges:
            seed_e, seed_n = free_edges & -free_edges, 0
        else:
            seed_e, seed_n = 0, free_nodes & -free_nodes
        seen_e, seen_n = seed_e, seed_n
        front_e, front_n = seed_e, seed_n
        while front_e or front_n:
            new_n = 0
            for i in _bits(front_e):
                new_n |= (1 << int(self.eu[i])) | (1 << int(self.ev[i]))
            new_n &= free_nodes & ~seen_n
            new_e = 0
            for v in _bits(front_n | new_n):
                new_e |= self.edges_at_node[v]
            new_e &= free_edges & ~seen_e
            seen_n |= new_n
            seen_e |= new_e
            front_e, front_n = new_e, new_n
        return seen_e == free_edges and seen_n == free_nodes


@dataclass
class HyperspaceSample:
    """Grid subcontinua of ``grid.graph`` at resolution ``grid.k``."""

    grid: GridSpace
    elements: list  # (node bitmask, edge bitmask), canonical order
    member_flags: list
    complete: bool  # every grid subcontinuum is listed (not only the members)
    _subcontinua: dict = field(default_factory=dict, repr=False)

    @property
    def graph(self) -> MetricGraph:
        return self.grid.graph

    @property
    def k(self) -> int:
        return self.grid.k

    @property
    def count(self) -> int:
        return len(self.elements)

    def member_count(self) -> int:
        return sum(self.member_flags)

    def members(self) -> "HyperspaceSample":
        keep = [i for i, f in enumerate(self.member_flags) if f]
        return HyperspaceSample(self.grid, [self.elements[i] for i in keep], [True] * len(keep), False)

    def subcontinuum(self, i: int) -> Subcontinuum:
        if i not in self._subcontinua:
            self._subcontinua[i] = self.grid.to_subcontinuum(*self.elements[i])
        return self._subcontinua[i]

    def subcontinua(self) -> list:
        return [self.subcontinuum(i) for i in range(self.count)]

    @cached_property
    def arrays(self):
        return self.grid.masks_to_arrays(self.elements)

    @cached_property
    def distance_units(self) -> np.ndarray:
        nodes, edges = self.arrays
        return self.grid.hausdorff_matrix(nodes, edges)

    def hausdorff(self, i: int, j: int) -> Fraction:
        return self.grid.to_fraction(self.distance_units[i, j])

    def index_of(self, S: Subcontinuum):
        key = self.grid.from_subcontinuum(S)
        return self._lookup.get(key)

    @cached_property
    def _lookup(self) -> dict:
        return {el: i for i, el in enumerate(self.elements)}


def _connected_edge_sets(adj: list, n: int, budget: int, start_count: int):
    count = start_count

    def grow(S, ext, excl, floor):
        nonlocal count
        count += 1
        if count > budget:
            raise BudgetError(f"grid enumeration exceeds the budget of {budget} elements", bound=budget)
        yield S
        while ext:
            w = ext & -ext
            ext ^= w
            i = w.bit_length() - 1
            new = adj[i] & ~S & ~excl & ~w & floor & ~ext
            yield from grow(S | w, ext | new, excl, floor)
            excl |= w

    for v in range(n):
        floor = ~((1 << (v + 1)) - 1)
        yield from grow(1 << v, adj[v] & floor, 0, floor)


def enumerate_grid_subcontinua(graph: MetricGraph, k: int, budget=None) -> HyperspaceSample:
    """All grid subcontinua of ``subdivide(graph, k)`` with their non-cut flags."""
    budget = element_budget(budget)
    grid = GridSpace(graph, k)
    elements = [(1 << v, 0) for v in range(grid.n_nodes)]
    if len(elements) > budget:
        raise BudgetError(f"grid enumeration exceeds the budget of {budget} elements", bound=budget)
    for emask in _connected_edge_sets(grid.edge_adjacency, grid.n_edges, budget, len(elements)):
        elements.append((grid.closure_nodes(emask), emask))
    elements.sort(key=lambda el: (bin(el[1]).count("1"), el[1], el[0]))
    flags = [grid.complement_connected(nm, em) for nm, em in elements]
    return HyperspaceSample(grid, elements, flags, True)


def _bond_members(grid: GridSpace, budget: int) -> list:
    n, m = grid.n_nodes, grid.n_edges
    size = n + m
    bedges = []
    for i in range(m):
        bedges.append((int(grid.eu[i]), n + i))
        bedges.append((int(grid.ev[i]), n + i))
    adj = [[] for _ in range(size)]
    for idx, (a, b) in enumerate(bedges):
        adj[a].append((b, idx))
        adj[b].append((a, idx))
    # spanning tree by DFS with Euler intervals
    parent_edge = [-1] * size
    tin = [0] * size
    tout = [0] * size
    order = []
    seen = [False] * size
    stack = [(0, iter(adj[0]))]
    seen[0] = True
    tin[0] = 0
    order.append(0)
    while stack:
        v, it = stack[-1]
        for w, idx in it:
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = idx
                tin[w] = len(order)
                order.append(w)
                stack.append((w, iter(adj[w])))
                break
        else:
            tout[v] = len(order)
            stack.pop()
    tree_children = [w for w in range(size) if parent_edge[w] >= 0]
    rank = len(bedges) - (size - 1)
    total = sum(math.comb(len(tree_children), r) for r in range(1, rank + 2))
    if total > budget:
        raise BudgetError(f"bond search needs {total} cut candidates, above the budget of {budget}", bound=total)
    tree_set = {parent_edge[w] for w in tree_children}
    nontree = [bedges[i] for i in range(len(bedges)) if i not in tree_set]

    def inside(w, v):
        return tin[w] <= tin[v] < tout[w]

    # fundamental cut of each tree edge, restricted to the non-tree edges
    cut_bits = {
        w: sum(1 << j for j, (a, b) in enumerate(nontree) if inside(w, a) != inside(w, b))
        for w in tree_children
    }
    members = []

    def connected(side):
        verts = [v for v in range(size) if side[v]]
        seen_local = {verts[0]}
        todo = [verts[0]]
        while todo:
            for w, _ in adj[todo.pop()]:
                if side[w] and w not in seen_local:
                    seen_local.add(w)
                    todo.append(w)
        return len(seen_local) == len(verts)

    for r in range(1, rank + 2):
        for cut in itertools.combinations(tree_children, r):
            x = 0
            for c in cut:
                x ^= cut_bits[c]
            if r + bin(x).count("1") > rank + 1:
                continue
            flips = [0] * (size + 1)
            for c in cut:
                flips[tin[c]] ^= 1
                flips[tout[c]] ^= 1
            parity = list(itertools.accumulate(flips[:size], lambda a, b: a ^ b))
            color = [parity[tin[v]] == 1 for v in range(size)]
            other = [not c for c in color]
            if rank > 0 and not (connected(color) and connected(other)):
                continue
            for side in (other, color):
                nodes_in = side[:n]
                edges_in = side[n:]
                if all(nodes_in[int(grid.eu[i])] and nodes_in[int(grid.ev[i])] for i in range(m) if edges_in[i]):
                    nm = sum(1 << v for v in range(n) if nodes_in[v])
                    em = sum(1 << i for i in range(m) if edges_in[i])
                    members.append((nm, em))
    members.append(((1 << n) - 1, (1 << m) - 1))
    return members


def sample_ncstar(graph: MetricGraph, k: int, method: str = "bonds", budget=None) -> HyperspaceSample:
    """The non-cut grid subcontinua at resolution ``k``.

    ``method="filter"`` enumerates all of ``C(X)`` and filters; ``"bonds"``
    lists members directly (polynomial for trees).
    """
    budget = element_budget(budget)
    if method == "filter":
        return enumerate_grid_subcontinua(graph, k, budget).members()
    if method != "bonds":
        raise InputError(f"unknown method {method!r}")
    grid = GridSpace(graph, k)
    members = sorted(set(_bond_members(grid, budget)), key=lambda el: (bin(el[1]).count("1"), el[1], el[0]))
    return HyperspaceSample(grid, members, [True] * len(members), False)


# ---------------------------------------------------------------------------
# clustering
# ---------------------------------------------------------------------------

@dataclass
class ClusterReport:
    eps: Fraction
    count: int
    labels: list
    min_inter_gap: Fraction | None
    max_intra_gap: Fraction | None
    grid_step: Fraction

    @property
    def adequate(self) -> bool:
        """Gap rule: largest linking gap inside a cluster < eps < smallest gap between clusters."""
        intra_ok = self.max_intra_gap is None or self.max_intra_gap < self.eps
        inter_ok = self.min_inter_gap is None or self.eps < self.min_inter_gap
        return intra_ok and inter_ok and self.grid_step < self.eps

    def sizes(self) -> list:
        return [self.labels.count(c) for c in range(self.count)]


def cluster_components(sample: HyperspaceSample, eps) -> ClusterReport:
    """Connected components of the ``H <= eps`` graph on the sample."""
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    units = sample.distance_units
    thr = math.floor(eps * sample.grid.scale)
    adj = units <= thr
    np.fill_diagonal(adj, False)
    count, labels = connected_components(adj.astype(np.int8), directed=False)
    # canonical labels: order of first appearance
    remap, canon = {}, []
    for lab in labels:
        remap.setdefault(int(lab), len(remap))
        canon.append(remap[int(lab)])
    labels = np.array(canon)
    inter = None
    if count > 1:
        diff = labels[:, None] != labels[None, :]
        inter = sample.grid.to_fraction(units[diff].min())
    intra = None
    for c in range(count):
        idx = np.flatnonzero(labels == c)
        if idx.size < 2:
            continue
        sub = units[np.ix_(idx, idx)].astype(float)
        mst = minimum_spanning_tree(sub)
        top = sample.grid.to_fraction(int(round(mst.max())))
        intra = top if intra is None else max(intra, top)
    steps = [e.length / sample.k for e in sample.graph.edges]
    return ClusterReport(eps, int(count), labels.tolist(), inter, intra, max(steps))


def eps_adjacency_edges(sample: HyperspaceSample, eps) -> list:
    thr = math.floor(Fraction(eps) * sample.grid.scale)
    units = sample.distance_units
    idx = np.argwhere(np.triu(units <= thr, 1))
    return [(int(i), int(j)) for i, j in idx]


# ---------------------------------------------------------------------------
# limits of sequences
# ---------------------------------------------------------------------------

@dataclass
class LimitReport:
    cauchy: bool
    limit: Subcontinuum | None
    member: bool | None
    nested: str | None
    gaps: list
    distances: list | None


def _structure(S: Subcontinuum):
    return tuple(sorted((S.graph.edge_order(e), len(ivs)) for e, ivs in S.traces.items()))


def _coords(S: Subcontinuum):
    out = []
    for e, ivs in sorted(S.traces.items(), key=lambda kv: S.graph.edge_order(kv[0])):
        for a, b in ivs:
            out.extend((a, b))
    return out


def _extrapolate(seq):
    """Limit of a geometric sequence from its tail, or ``None`` if not geometric."""
    if all(x == seq[-1] for x in seq[-3:]):
        return seq[-1]
    diffs = [b - a for a, b in zip(seq, seq[1:])]
    if any(d == 0 for d in diffs):
        return None
    ratios = {b / a for a, b in zip(diffs, diffs[1:])}
    if len(ratios) != 1:
        return None
    rho = ratios.pop()
    if not (-1 < rho < 1):
        return None
    return seq[-1] + diffs[-1] * rho / (1 - rho)


def verify_limit(graph: MetricGraph, seq: list) -> LimitReport:
    """Cauchy diagnosis and, for recognized geometric interval families, the exact limit.

    A family is recognized when its last three (or more) elements share the
    same trace structure and every interval endpoint moves geometrically
    with one common ratio (or stays fixed).
    """
    if not seq:
        raise InputError("empty sequence")
    gaps = [hausdorff_distance(graph, a, b) for a, b in zip(seq, seq[1:])]
    cauchy = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:])) or all(g == 0 for g in gaps)
    nested = None
    if len(seq) > 1:
        if all(a.issubset(b) for a, b in zip(seq, seq[1:])):
            nested = "increasing"
        elif all(b.issubset(a) for a, b in zip(seq, seq[1:])):
            nested = "decreasing"
    if all(g == 0 for g in gaps):
        limit = seq[-1]
        return LimitReport(True, limit, is_noncut(graph, limit), nested, gaps,
                           [Fraction(0)] * len(seq))
    tail = seq[-3:] if len(seq) >= 3 else None
    limit = None
    if cauchy and tail is not None and len({_structure(S) for S in seq}) == 1:
        columns = list(zip(*[_coords(S) for S in seq]))
        limits = [_extrapolate(list(col)) for col in columns]
        if all(x is not None for x in limits):
            ratios = set()
            for col in columns:
                d = [b - a for a, b in zip(col, col[1:])]
                if any(d):
                    ratios.add(d[-1] / d[-2])
            if len(ratios) <= 1 and all(0 <= x <= 1 for x in limits):
                raw = {}
                it = iter(limits)
                for e, ivs in sorted(seq[0].traces.items(), key=lambda kv: graph.edge_order(kv[0])):
                    raw[e] = [(next(it), next(it)) for _ in ivs]
                try:
                    limit = Subcontinuum(graph, raw)
                except InputError:
                    limit = None
    if limit is None:
        return LimitReport(cauchy, None, None, nested, gaps, None)
    dists = [hausdorff_distance(graph, S, limit) for S in seq]
    return LimitReport(cauchy, limit, is_noncut(graph, limit), nested, gaps, dists)
