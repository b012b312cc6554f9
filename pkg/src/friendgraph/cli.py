"""Command-line pipeline: generate -> crawl -> clean -> analyze -> filter -> layout -> render.

Exit status: 0 on success, 1 on bad input or usage, 2 on internal error.
Every output file is written atomically.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import traceback

import numpy as np

from friendgraph.cleaner import clean, clean_to_simple
from friendgraph.crawl import CrawlConfig, GeneratorSpec, TruthNetwork, crawl, crawl_coverage, generate
from friendgraph.errors import GraphInputError
from friendgraph.filters import FilterSpec, induced_subgraph, select_nodes
from friendgraph.graph import SimpleGraph, freeze
from friendgraph.graphml import parse_graphml, write_graphml
from friendgraph.layout import LayoutParams, fruchterman_reingold, render_svg
from friendgraph.metrics import METRIC_NAMES, analyze, parse_geodesic_mode
from friendgraph import tables

log = logging.getLogger("friendgraph")


class UsageError(Exception):
    pass


class ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _fraction(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1], got {text}")
    return value


def _metric_cutoff(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected METRIC=VALUE, got {text}")
    if name not in METRIC_NAMES:
        raise argparse.ArgumentTypeError(f"unknown metric {name!r}")
    return name, float(value)


def _require_file(path):
    if not os.path.isfile(path):
        raise GraphInputError(f"input file not found: {path}")
    return path


def load_simple(path) -> SimpleGraph:
    """Parse a GraphML file that is expected to be clean already."""
    return freeze(parse_graphml(_require_file(path)))


def load_truth(graph_path, meta_path) -> TruthNetwork:
    graph = load_simple(graph_path)
    with open(_require_file(meta_path), encoding="utf-8") as fh:
        try:
            meta = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphInputError(f"{meta_path}: {exc}") from None
    return TruthNetwork.from_meta(graph, meta)


def cmd_generate(args):
    model = args.model
    kwargs = dict(n=args.nodes, public_fraction=args.public_fraction, page_fraction=args.page_fraction, rng_seed=args.seed)
    if model == "ba":
        kwargs["m_links"] = args.m if args.m is not None else 2.0
    elif model == "er":
        if args.p is None:
            raise GraphInputError("--model er requires --p")
        kwargs["edge_prob"] = args.p
    else:
        kwargs["k_neighbors"] = args.k if args.k is not None else 4
        kwargs["rewire_prob"] = args.rewire if args.rewire is not None else 0.1
    truth = generate(GeneratorSpec(model, **kwargs))
    meta_path = args.meta or os.path.splitext(args.output)[0] + ".json"
    write_graphml(truth.graph, args.output)
    tables.atomic_write_text(meta_path, truth.meta_json())
    log.info("wrote %s (%d nodes, %d edges) and %s", args.output, truth.graph.n, truth.graph.m, meta_path)


def cmd_crawl(args):
    truth = load_truth(args.truth, args.meta)
    raw = crawl(truth, CrawlConfig(args.seed_node, args.depth, not args.no_duplicates))
    write_graphml(raw, args.output)
    log.info("wrote %s (%d node records, %d edge records)", args.output, raw.n_records, raw.e_records)


def cmd_clean(args):
    cleaned, stats = clean(parse_graphml(_require_file(args.input)))
    g = freeze(cleaned)
    write_graphml(g, args.output)
    if args.stats:
        tables.atomic_write_text(args.stats, stats.to_json())
    log.info("wrote %s (%d nodes, %d edges); %s", args.output, g.n, g.m, stats)


def cmd_analyze(args):
    g, stats = clean_to_simple(parse_graphml(_require_file(args.input)))
    mode = parse_geodesic_mode(args.geodesic, rng_seed=args.seed)
    report = analyze(g, mode, threads=args.threads, cleaning=stats)
    # render everything first so a failure leaves no partial set of outputs
    outputs = [(args.report, tables.report_json(report)), (args.nodes, tables.node_metrics_csv(report.table))]
    if args.edges:
        outputs.append((args.edges, tables.edge_metrics_csv(g, report.edge_betweenness)))
    for path, text in outputs:
        tables.atomic_write_text(path, text)
    if args.figures:
        from friendgraph.plotting import render_report_figures

        render_report_figures(report, args.figures)
    log.info("analyzed %d nodes, %d edges", g.n, g.m)


def cmd_filter(args):
    g = load_simple(args.input)
    table = tables.read_node_metrics_csv(_require_file(args.metrics))
    if args.giant:
        spec = FilterSpec.giant_component()
    elif args.min is not None:
        spec = FilterSpec.threshold(args.min[0], args.min[1], ">=")
    elif args.max is not None:
        spec = FilterSpec.threshold(args.max[0], args.max[1], "<=")
    else:
        if args.by is None:
            raise GraphInputError("--top-k requires --by METRIC")
        spec = FilterSpec.top_k(args.by, args.top_k)
    sub = induced_subgraph(g, select_nodes(g, table, spec))
    write_graphml(sub, args.output)
    log.info("wrote %s (%d nodes, %d edges)", args.output, sub.n, sub.m)


def cmd_layout(args):
    g = load_simple(args.input)
    params = LayoutParams(args.width, args.height, args.iterations, rng_seed=args.seed)
    pos = fruchterman_reingold(g, params, threads=args.threads)
    tables.atomic_write_text(args.output, tables.positions_csv(g.ids, pos))


def cmd_render(args):
    g = load_simple(args.input)
    positions = tables.read_positions_csv(_require_file(args.positions))
    sizes = None
    if args.size_by:
        if not args.metrics:
            raise GraphInputError("--size-by requires --metrics")
        table = tables.read_node_metrics_csv(_require_file(args.metrics))
        lookup = dict(zip(table.ids, table[args.size_by].tolist()))
        try:
            sizes = np.array([lookup[nid] for nid in g.ids])
        except KeyError as exc:
            raise GraphInputError(f"metrics table has no row for node {exc.args[0]!r}") from None
    svg = render_svg(g, positions, sizes, args.width, args.height)
    tables.atomic_write_bytes(args.output, svg)


def cmd_coverage(args):
    truth = load_truth(args.truth, args.meta)
    observed = load_simple(args.observed)
    report = crawl_coverage(truth, observed)
    tables.atomic_write_text(args.output, json.dumps(report.as_dict(), indent=2) + "\n")


def build_parser() -> ArgParser:
    parser = ArgParser(prog="friendgraph", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=ArgParser, metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("generate", help="generate a synthetic truth network")
    p.add_argument("--model", choices=("ba", "er", "ws"), required=True)
    p.add_argument("--nodes", type=_nonneg_int, required=True)
    p.add_argument("--m", type=float, help="ba: links per arriving node (fractional allowed)")
    p.add_argument("--p", type=_fraction, help="er: edge probability")
    p.add_argument("--k", type=_positive_int, help="ws: ring neighbors (even)")
    p.add_argument("--rewire", type=_fraction, help="ws: rewiring probability")
    p.add_argument("--public-fraction", type=_fraction, default=1.0)
    p.add_argument("--page-fraction", type=_fraction, default=0.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--meta", help="visibility sidecar (default: OUTPUT with .json)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("crawl", help="simulate the depth-limited friend-list crawl")
    p.add_argument("truth")
    p.add_argument("--meta", required=True)
    p.add_argument("--from", dest="seed_node", required=True)
    p.add_argument("--depth", type=_nonneg_int, default=3)
    p.add_argument("--no-duplicates", action="store_true", help="record each node and edge once")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("clean", help="remove duplicate nodes, parallel edges and self-loops")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--stats")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("analyze", help="compute overall and per-node metrics")
    p.add_argument("input")
    p.add_argument("--geodesic", default="exact", help="exact | sampled:K")
    p.add_argument("--seed", type=int, default=0, help="source sampling seed for --geodesic sampled:K")
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("--report", required=True)
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges")
    p.add_argument("--figures", metavar="DIR", help="also write PNG distribution plots to DIR")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("filter", help="keep nodes selected by a metric")
    p.add_argument("input")
    p.add_argument("--metrics", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--top-k", type=_positive_int)
    mode.add_argument("--min", type=_metric_cutoff, metavar="METRIC=V")
    mode.add_argument("--max", type=_metric_cutoff, metavar="METRIC=V")
    mode.add_argument("--giant", action="store_true")
    p.add_argument("--by", choices=METRIC_NAMES)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("layout", help="Fruchterman-Reingold layout")
    p.add_argument("input")
    p.add_argument("--iterations", type=_nonneg_int, default=50)
    p.add_argument("--width", type=float, default=1000.0)
    p.add_argument("--height", type=float, default=1000.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("render", help="draw a laid-out graph as SVG")
    p.add_argument("input")
    p.add_argument("--positions", required=True)
    p.add_argument("--size-by", choices=METRIC_NAMES)
    p.add_argument("--metrics")
    p.add_argument("--width", type=float, default=1000.0)
    p.add_argument("--height", type=float, default=1000.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("coverage", help="compare a cleaned crawl with its truth network")
    p.add_argument("truth")
    p.add_argument("--meta", required=True)
    p.add_argument("observed")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_coverage)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except (GraphInputError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"friendgraph {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
