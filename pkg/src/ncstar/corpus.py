"""Named example graphs used throughout the tests, notebooks and CLI."""
from __future__ import annotations

from .metric_graph import MetricGraph


def arc(length=1) -> MetricGraph:
    return MetricGraph.build([("e", "v0", "v1", length)])


def circle(length=4) -> MetricGraph:
    return MetricGraph.build([("c", "v0", "v0", length)])


def star(n: int) -> MetricGraph:
    """Simple n-od with unit legs oriented from the center ``r``."""
    return MetricGraph.build([(f"leg{i}", "r", f"e{i}") for i in range(1, n + 1)])


def triod() -> MetricGraph:
    return star(3)


def h_tree() -> MetricGraph:
    """Two ramification nodes joined by an internal edge, four unit hairs."""
    return MetricGraph.build([
        ("mid", "l", "r"),
        ("h1", "e1", "l"), ("h2", "e2", "l"),
        ("h3", "r", "e3"), ("h4", "r", "e4"),
    ])


def caterpillar() -> MetricGraph:
    """Spine r1-r2-r3 with 2, 1 and 2 unit hairs (three ramification points, five endpoints)."""
    return MetricGraph.build([
        ("s1", "r1", "r2"), ("s2", "r2", "r3"),
        ("h1", "r1", "e1"), ("h2", "r1", "e2"),
        ("h3", "r2", "e3"),
        ("h4", "r3", "e4"), ("h5", "r3", "e5"),
    ])


def lollipop(loop_length=4) -> MetricGraph:
    return MetricGraph.build([("loop", "v", "v", loop_length), ("hair", "v", "e")])


def theta() -> MetricGraph:
    return MetricGraph.build([("a", "p", "q"), ("b", "p", "q"), ("c", "p", "q")])


def theta_with_tail() -> MetricGraph:
    """Theta graph with a hair at ``p``: the hair's base splits X into only two pieces."""
    return MetricGraph.build([("a", "p", "q"), ("b", "p", "q"), ("c", "p", "q"), ("t", "p", "e")])


def figure_eight() -> MetricGraph:
    return MetricGraph.build([("l1", "v", "v", 2), ("l2", "v", "v", 2)])


def dumbbell() -> MetricGraph:
    return MetricGraph.build([("l1", "u", "u", 2), ("bar", "u", "w"), ("l2", "w", "w", 2)])


def k4() -> MetricGraph:
    pairs = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]
    return MetricGraph.build([(f"{x}{y}", x, y) for x, y in pairs])


def square_with_tail() -> MetricGraph:
    """A 4-cycle with one hair: ramification point on a cycle that is not a loop."""
    return MetricGraph.build([
        ("s1", "a", "b"), ("s2", "b", "c"), ("s3", "c", "d"), ("s4", "d", "a"), ("t", "a", "e"),
    ])


def split_arc() -> MetricGraph:
    """An arc drawn with a degree-2 middle node."""
    return MetricGraph.build([("e0", "v0", "m"), ("e1", "m", "v1")])


def split_circle() -> MetricGraph:
    return MetricGraph.build([("c0", "u", "w", 2), ("c1", "w", "u", 2)])


NAMED = {
    "arc": arc,
    "circle": circle,
    "triod": triod,
    "star5": lambda: star(5),
    "h_tree": h_tree,
    "caterpillar": caterpillar,
    "lollipop": lollipop,
    "theta": theta,
    "theta_with_tail": theta_with_tail,
    "figure_eight": figure_eight,
    "dumbbell": dumbbell,
    "k4": k4,
    "square_with_tail": square_with_tail,
    "split_arc": split_arc,
    "split_circle": split_circle,
}


def unit_metric(graph: MetricGraph) -> MetricGraph:
    """Same combinatorial graph with every edge of length one."""
    return MetricGraph.build([(e.id, e.tail, e.head) for e in graph.edges], graph.nodes)
