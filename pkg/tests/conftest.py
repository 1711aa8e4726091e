from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ncstar import corpus
from ncstar.metric_graph import Node
from ncstar.subcontinuum import Subcontinuum

settings.register_profile("ncstar", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ncstar")

GRAPHS = ["arc", "circle", "triod", "h_tree", "lollipop", "theta", "figure_eight", "caterpillar"]
TREES = ["triod", "h_tree", "caterpillar", "star5"]


def graph(name):
    return corpus.NAMED[name]()


@st.composite
def points(draw, G, denominator=8):
    if draw(st.booleans()):
        return Node(draw(st.sampled_from(sorted(G.nodes))))
    e = draw(st.sampled_from([e.id for e in G.edges]))
    t = Fraction(draw(st.integers(1, denominator - 1)), denominator)
    return G.point(e, t)


def ball(G, p, r) -> Subcontinuum:
    """Closed metric ball ``{x : d(p, x) <= r}``; connected in a length space."""
    r = Fraction(r)
    dist = {}
    for v in G.nodes:
        dist[v] = G.distance(p, Node(v))
    traces = {}
    for e in G.edges:
        ln = e.length
        pieces = []
        # distance along the edge from the tail: min(d_tail + y, d_head + ln - y)
        if dist[e.tail] <= r:
            pieces.append((Fraction(0), min(ln, r - dist[e.tail]) / ln))
        if dist[e.head] <= r:
            pieces.append((max(Fraction(0), ln - (r - dist[e.head])) / ln, Fraction(1)))
        if getattr(p, "edge", None) == e.id:
            lo, hi = p.t - r / ln, p.t + r / ln
            pieces.append((max(Fraction(0), lo), min(Fraction(1), hi)))
        if pieces:
            traces[e.id] = pieces
    return Subcontinuum(G, traces)


@st.composite
def subcontinua(draw, G, denominator=8):
    p = draw(points(G, denominator))
    r = Fraction(draw(st.integers(0, 3 * denominator)), denominator)
    return ball(G, p, r)


ACCEPTANCE = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    """Keep one verdict line per acceptance criterion and print it."""
    line = f"{criterion}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
            terminalreporter.write_line(ACCEPTANCE[key])
