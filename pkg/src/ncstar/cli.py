"""Command-line front end. Every command prints one JSON document."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dendrite, graph_ncstar, oracle, tree_ncstar
from .errors import BudgetError, DomainError, InputError, InsufficientResolution
from .metric_graph import GraphPoint, MetricGraph, Node, rational, render
from .subcontinuum import Subcontinuum

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_RESOLUTION = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _positive_rational(text: str) -> Fraction:
    try:
        q = rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc
    if q <= 0:
        raise InputError(f"expected a positive rational, got {text}")
    return q


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise InputError(f"not an integer: {text!r}") from exc
    if n <= 0:
        raise InputError(f"expected a positive integer, got {text}")
    return n


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from exc


def load_graph(path: str) -> MetricGraph:
    return MetricGraph.from_dict(_read_json(path))


def load_subcontinuum(G: MetricGraph, path: str) -> Subcontinuum:
    return Subcontinuum.from_dict(G, _read_json(path))


def parse_point(G: MetricGraph, text: str) -> GraphPoint:
    """``"v"`` for a node or ``"edge@t"`` for an offset along an edge."""
    if "@" in text:
        eid, t = text.rsplit("@", 1)
        try:
            return G.point(eid, rational(t))
        except (ValueError, ZeroDivisionError, KeyError) as exc:
            raise InputError(f"bad point {text!r}") from exc
    p = Node(text)
    G.check_point(p)
    return p


def _graph_info(G: MetricGraph) -> dict:
    return {"kind": G.classify(), "nodes": len(G.nodes), "edges": len(G.edges)}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> dict:
    G = load_graph(args.graph)
    return {
        "kind": G.classify(),
        "endpoints": sorted(G.endpoints),
        "ramification_points": sorted(G.ramification_nodes),
        "cycle_rank": G.cycle_rank,
        "total_length": render(G.total_length),
    }


def cmd_ncstar_enumerate(args) -> dict:
    G = load_graph(args.graph)
    return {"graph": _graph_info(G), "ncstar": tree_ncstar.enumerate_ncstar(G).to_dict()}


def cmd_ncstar_model(args) -> dict:
    G = load_graph(args.graph)
    model = tree_ncstar.build_model(G, args.samples)
    out = model.to_dict()
    out["formula"] = tree_ncstar.component_count(G)
    return out


def cmd_components(args) -> dict:
    G = load_graph(args.graph)
    if G.is_tree:
        out = {"formula": tree_ncstar.component_count(G)}
    else:
        report = graph_ncstar.decide_properties(G)
        out = {"formula": report.components, "rationale": report.rationale}
    if args.oracle:
        sample = oracle.sample_ncstar(G, args.k, budget=args.budget).members()
        clusters = oracle.cluster_components(sample, args.eps)
        out["oracle_clusters"] = clusters.count
        out["gaps"] = {
            "eps": render(clusters.eps),
            "max_intra": None if clusters.max_intra_gap is None else render(clusters.max_intra_gap),
            "min_inter": None if clusters.min_inter_gap is None else render(clusters.min_inter_gap),
            "grid_step": render(clusters.grid_step),
            "adequate": clusters.adequate,
        }
        out["cluster_sizes"] = clusters.sizes()
        out["members"] = sample.count
    return out


def cmd_properties(args) -> dict:
    G = load_graph(args.graph)
    return graph_ncstar.decide_properties(G, args.k, args.budget).to_dict()


def cmd_witness(args) -> dict:
    G = load_graph(args.graph)
    w = graph_ncstar.noncompact_witness(G, args.N, args.budget)
    out = w.to_dict()
    out["verified"] = w.verified(G)
    return out


def cmd_lc_delta(args) -> dict:
    G = load_graph(args.graph)
    A = load_subcontinuum(G, args.subcontinuum)
    p0 = parse_point(G, args.basepoint) if args.basepoint else None
    if p0 is None and not A.is_whole:
        p0 = graph_ncstar.default_basepoint(G, A)
    return graph_ncstar.local_delta(G, A, p0).to_dict()


def cmd_lc_chain(args) -> dict:
    G = load_graph(args.graph)
    A, B = load_subcontinuum(G, args.a), load_subcontinuum(G, args.b)
    p0 = parse_point(G, args.basepoint) if args.basepoint else None
    chain = graph_ncstar.connect_chain(G, A, B, args.eps, args.steps, p0)
    from .subcontinuum import hausdorff_distance

    gaps = [hausdorff_distance(G, x, y) for x, y in zip(chain, chain[1:])]
    return {
        "length": len(chain),
        "chain": [S.to_dict() for S in chain],
        "max_gap": render(max(gaps, default=Fraction(0))),
        "max_distance_from_a": render(max(hausdorff_distance(G, S, A) for S in chain)),
    }


def _dot(sample, eps) -> str:
    lines = ["graph eps_adjacency {"]
    lines += [f"  n{i};" for i in range(sample.count)]
    lines += [f"  n{i} -- n{j};" for i, j in oracle.eps_adjacency_edges(sample, eps)]
    lines.append("}")
    return "\n".join(lines)


def cmd_oracle_sample(args):
    G = load_graph(args.graph)
    sample = oracle.sample_ncstar(G, args.k, budget=args.budget).members()
    if args.format == "dot":
        if args.eps is None:
            raise InputError("--format dot needs --eps")
        return _dot(sample, args.eps)
    out = {"k": args.k, "members": sample.count, "grid_step": render(max(e.length for e in G.edges) / args.k)}
    if args.eps is not None:
        clusters = oracle.cluster_components(sample, args.eps)
        out["clusters"] = clusters.count
        out["labels"] = clusters.labels
        out["adequate"] = clusters.adequate
    if args.list:
        out["elements"] = [S.to_dict() for S in sample.subcontinua()]
    return out


def _approximant(args):
    return dendrite.build_approximant(args.s, args.d)


def cmd_dendrite_build(args) -> dict:
    T = _approximant(args)
    out = T.to_dict()
    out["formula"] = T.component_count()
    return out


def cmd_dendrite_witness(args) -> dict:
    T = _approximant(args)
    w = dendrite.nowhere_compact_witness(T, args.case, args.eps, args.N)
    out = w.to_dict()
    out["verified"] = w.verified(T.graph)
    return out


def cmd_dendrite_clopen(args) -> dict:
    T = _approximant(args)
    family = dendrite.branch_cut_family(T, T.ab_point(args.p), T.ab_point(args.q))
    report = dendrite.clopen_family_check(T, family, args.k)
    out = report.to_dict()
    obs = dendrite.observation_checks(family)
    out["monotone"], out["exclusions"] = obs.monotone, obs.exclusions
    if report.verdict == "insufficient resolution":
        raise InsufficientResolution("no family member on the grid", required=2 * args.k)
    return out


def cmd_dendrite_basis(args) -> dict:
    T = _approximant(args)
    report = dendrite.shrinking_basis(T, T.ab_point(args.at), args.levels, args.eps)
    out = report.to_dict()
    if args.eps is not None and report.reached is None:
        raise InsufficientResolution("no level reaches the requested diameter", required=T.depth + 1)
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ncstar", description="Non-cut subcontinua of finite graphs and dendrite approximants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(parent, name, func, help_text):
        c = parent.add_parser(name, help=help_text)
        c.add_argument("graph", help="graph JSON file")
        c.set_defaults(func=func)
        return c

    def add_budget(c):
        c.add_argument("--budget", type=_positive_int, default=None, help="oracle element budget")

    graph_cmd(sub, "classify", cmd_classify, "Arc, Tree, Circle or GeneralGraph")

    nc = sub.add_parser("ncstar", help="trees only").add_subparsers(dest="action", required=True, parser_class=_Parser)
    graph_cmd(nc, "enumerate", cmd_ncstar_enumerate, "parameterized families of members")
    c = graph_cmd(nc, "model", cmd_ncstar_model, "sampled charts of every component")
    c.add_argument("--samples", type=_positive_int, default=4)

    c = graph_cmd(sub, "components", cmd_components, "number of components")
    c.add_argument("--oracle", action="store_true")
    c.add_argument("-k", type=_positive_int, default=8)
    c.add_argument("--eps", type=_positive_rational, default=Fraction(1, 4))
    add_budget(c)

    c = graph_cmd(sub, "properties", cmd_properties, "compactness, connectedness and so on")
    c.add_argument("-k", type=_positive_int, default=4)
    add_budget(c)

    w = sub.add_parser("witness").add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = graph_cmd(w, "noncompact", cmd_witness, "members converging to a non-member")
    c.add_argument("-N", type=_positive_int, default=8)
    add_budget(c)

    lc = sub.add_parser("lc").add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = graph_cmd(lc, "delta", cmd_lc_delta, "radius budget around a member")
    c.add_argument("--subcontinuum", required=True)
    c.add_argument("--basepoint")
    c = graph_cmd(lc, "chain", cmd_lc_chain, "a fine chain of members from A to B")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--eps", type=_positive_rational, required=True)
    c.add_argument("--steps", type=_positive_int, default=4)
    c.add_argument("--basepoint")

    o = sub.add_parser("oracle").add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = graph_cmd(o, "sample", cmd_oracle_sample, "grid members of the hyperspace")
    c.add_argument("-k", type=_positive_int, required=True)
    c.add_argument("--eps", type=_positive_rational)
    c.add_argument("--format", choices=["json", "dot"], default="json")
    c.add_argument("--list", action="store_true", help="include every member")
    add_budget(c)

    d = sub.add_parser("dendrite").add_subparsers(dest="action", required=True, parser_class=_Parser)

    def dcmd(name, func, help_text, depth=4):
        c = d.add_parser(name, help=help_text)
        c.add_argument("-s", type=_positive_int, default=3, help="ramification order")
        c.add_argument("-d", type=int, default=depth, help="depth")
        c.set_defaults(func=func)
        return c

    dcmd("build", cmd_dendrite_build, "finite approximant")
    c = dcmd("witness", cmd_dendrite_witness, "members near Y converging to a non-member")
    c.add_argument("--case", type=int, choices=[1, 2, 3], required=True)
    c.add_argument("--eps", type=_positive_rational, required=True)
    c.add_argument("-N", type=_positive_int, default=6)
    c = dcmd("clopen", cmd_dendrite_clopen, "a branch-cut family against the grid oracle", depth=2)
    c.add_argument("--p", type=_positive_rational, default=Fraction(1, 4))
    c.add_argument("--q", type=_positive_rational, default=Fraction(3, 4))
    c.add_argument("-k", type=_positive_int, default=4)
    c = dcmd("basis", cmd_dendrite_basis, "nested families with shrinking diameter")
    c.add_argument("--at", type=_positive_rational, default=Fraction(11, 32))
    c.add_argument("--levels", type=_positive_int, default=8)
    c.add_argument("--eps", type=_positive_rational)
    return p


def _emit(doc, stream) -> None:
    if isinstance(doc, str):
        stream.write(doc + "\n")
    else:
        stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        doc = args.func(args)
    except (InputError, DomainError) as exc:
        _emit({"error": "input", "message": str(exc)}, stdout)
        return EXIT_INPUT
    except BudgetError as exc:
        _emit({"error": "budget", "message": str(exc), "bound": exc.bound}, stdout)
        return EXIT_BUDGET
    except InsufficientResolution as exc:
        _emit({"error": "insufficient resolution", "message": str(exc), "required": exc.required}, stdout)
        return EXIT_RESOLUTION
    _emit(doc, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
