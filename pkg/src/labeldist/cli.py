"""Command-line harness: generators, oracle builds, queries, spanners, verification.

Exit code 0 means every check the command ran passed; 1 means a check
failed; 2 means bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .dynamic_oracle import build_dynamic, dynamic_query, update_label
from .exact import build_exact, dump_csv
from .generators import ExperimentConfig, generate
from .graph import Graph, GraphError, LabelAssignment, dijkstra, read_graph, write_graph
from .spanner import (SpannerError, as_subgraph, build_unweighted_spanner,
                      build_weighted_spanner)
from .static_oracle import (OracleError, build_static_oracle, dump_static_oracle,
                            load_static_oracle, static_query)
from .verify import parse_script, verify_oracle, verify_spanner


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _write_report(path: str, payload: dict) -> None:
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _load_instance(args) -> tuple[Graph, LabelAssignment]:
    g, labels = read_graph(args.graph)
    if getattr(args, "labels_inline", None):
        label_of = [int(t) for t in args.labels_inline.split(",")]
        if len(label_of) != g.node_count:
            raise GraphError(f"--labels-inline needs {g.node_count} labels")
        labels = LabelAssignment(label_of, max(label_of) + 1)
    return g, labels


def _seed_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",")]


def _fmt(x: float) -> str:
    return "inf" if x == math.inf else repr(x)


def cmd_gen(args) -> int:
    config = ExperimentConfig(generator=args.gen, weights=args.weights, labels=args.labels)
    g, labels = generate(config, args.seed)
    write_graph(args.out, g, labels)
    print(f"wrote {args.out}: n={g.node_count} m={g.edge_count} l={labels.label_count}")
    return 0


def cmd_build_static(args) -> int:
    g, labels = _load_instance(args)
    oracle = build_static_oracle(g, labels, args.k, args.seed)
    with open(args.out, "w", encoding="utf-8") as f:
        dump_static_oracle(oracle, f)
    print(f"wrote {args.out}: entries={oracle.entry_count()}")
    return 0


def cmd_query(args) -> int:
    with open(args.oracle, "r", encoding="utf-8") as f:
        oracle = load_static_oracle(f)
    print(_fmt(static_query(oracle, args.v, args.label)))
    return 0


def cmd_dynamic(args) -> int:
    g, labels = _load_instance(args)
    with open(args.script, "r", encoding="utf-8") as f:
        ops = parse_script(f.read())
    oracle = build_dynamic(g, labels, args.k, args.seed)
    for op, v, lam in ops:
        if op == "U":
            update_label(oracle, v, lam)
        else:
            print(_fmt(dynamic_query(oracle, v, lam)))
    return 0


def cmd_spanner(args) -> int:
    g, labels = _load_instance(args)
    build = build_weighted_spanner if args.weighted else build_unweighted_spanner
    result = build(g, labels, args.k, args.eps)
    report = verify_spanner(g, labels, args.k, args.eps, args.weighted, result=result)
    hg = as_subgraph(g, result.edges)
    write_graph(args.out, hg, labels)
    if args.report:
        _write_report(args.report, report.to_dict())
    print(f"wrote {args.out}: edges={hg.edge_count} of {g.edge_count}, "
          f"max stretch {report.aggregates['max_ratio']:.4f} "
          f"(bound {report.aggregates['bound']:.4f})")
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    g, labels = _load_instance(args)
    table = build_exact(g, labels)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as f:
            dump_csv(table, f)
    else:
        dump_csv(table, sys.stdout)
    return 0


def cmd_verify_oracle(args) -> int:
    g, labels = _load_instance(args)
    script = None
    if args.script:
        with open(args.script, "r", encoding="utf-8") as f:
            script = parse_script(f.read())
    if args.mode == "dynamic" and script is None:
        script = []
    report = verify_oracle(g, labels, args.mode, args.k, _seed_list(args.seed),
                           script=script)
    if args.report:
        _write_report(args.report, report.to_dict())
    status = "PASS" if report.passed else "FAIL"
    print(f"{status} mode={args.mode} k={args.k} max_ratio={report.aggregates['max_ratio']:.4f} "
          f"bound={report.aggregates['bound']}")
    return 0 if report.passed else 1


def cmd_verify_spanner(args) -> int:
    g, labels = _load_instance(args)
    report = verify_spanner(g, labels, args.k, args.eps, args.weighted)
    if args.report:
        _write_report(args.report, report.to_dict())
    status = "PASS" if report.passed else "FAIL"
    print(f"{status} weighted={args.weighted} k={args.k} eps={args.eps} "
          f"edges={report.aggregates['edge_count']} "
          f"max_ratio={report.aggregates['max_ratio']:.4f} bound={report.aggregates['bound']:.4f}")
    return 0 if report.passed else 1


def cmd_stats(args) -> int:
    g, labels = _load_instance(args)
    degrees = [len(adj) for adj in g.adjacency]
    comps = 0
    seen = [False] * g.node_count
    for v in range(g.node_count):
        if not seen[v]:
            comps += 1
            for u, d in enumerate(dijkstra(g, {v}).dist):
                if d != math.inf:
                    seen[u] = True
    payload = {
        "node_count": g.node_count,
        "edge_count": g.edge_count,
        "label_count": labels.label_count,
        "unit_weights": g.unit_weights,
        "min_weight": g.min_weight() if g.edges else None,
        "max_weight": max((w for _, _, w in g.edges), default=None),
        "degree_min": min(degrees, default=0),
        "degree_max": max(degrees, default=0),
        "components": comps,
        "class_sizes": [len(c) for c in labels.classes],
    }
    if args.report:
        _write_report(args.report, payload)
    else:
        _write_report("-", payload)
    return 0


def _add_instance_flags(p) -> None:
    p.add_argument("--graph", required=True, help="graph file (n m l header format)")
    p.add_argument("--labels-inline", dest="labels_inline", default=None,
                   help="comma-separated labels overriding the file's assignment")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labeldist",
                                     description="Vertex-label distance oracles and spanners")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--gen", required=True, help="gnm:N:M | grid:W:H | path:N")
    p.add_argument("--weights", default="unit", help="unit | uniform:LO:HI")
    p.add_argument("--labels", default="uniform:1", help="uniform:L | clustered:L:PATCH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build-static", help="build and dump the static oracle")
    _add_instance_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_static)

    p = sub.add_parser("query", help="answer one query from an oracle dump")
    p.add_argument("--oracle", required=True)
    p.add_argument("v", type=int)
    p.add_argument("label", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("dynamic", help="run an update/query script")
    _add_instance_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--script", required=True, help="text file of 'U v lam' / 'Q v lam' lines")
    p.set_defaults(func=cmd_dynamic)

    p = sub.add_parser("spanner", help="build a spanner, write its edges and a report")
    _add_instance_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_spanner)

    p = sub.add_parser("verify", help="dump the exact table as CSV (v,label,dist)")
    _add_instance_flags(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-oracle", help="sweep all pairs against the exact table")
    _add_instance_flags(p)
    p.add_argument("--mode", choices=("static", "dynamic"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", default="0", help="seed or comma list of seeds")
    p.add_argument("--script", default=None, help="update/query script (dynamic mode)")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_verify_oracle)

    p = sub.add_parser("verify-spanner", help="build and check a spanner")
    _add_instance_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_verify_spanner)

    p = sub.add_parser("stats", help="print instance statistics as JSON")
    _add_instance_flags(p)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, OracleError, SpannerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
