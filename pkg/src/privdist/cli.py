"""Command-line interface: stats, generate, sensitivity, query, experiment."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from typing import Optional, Sequence

from . import bench
from .errors import GraphError, ParameterError, PrivDistError
from .graph import edge_connectivity, is_connected, load_edge_list, load_labeled_edge_list, write_edge_list
from .mechanisms import MechanismKind, answer
from .noise import ScaleRule, default_delta, derive_params, make_rng, resolve_seed
from .paths import degree_stats, diameter_upper_bound, distance_matrix, distance_summary
from .sensitivity import NeighborOp, smooth_sensitivity
from .synth import HararySpec, complete_graph, cycle_graph, harary, path_graph

EDGE_CONNECTIVITY_CAP = 5000


def parse_eps_range(text: str) -> list[float]:
    """``a:b:step`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
                raise ValueError
            start, stop, step = parts
            count = int(round((stop - start) / step)) + 1
            values = [start + i * step for i in range(count)]
            values = [round(v, 12) for v in values if v <= stop + 1e-9]
        else:
            values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParameterError(f"bad epsilon range {text!r}; use from:to:step or a,b,c") from None
    if not values:
        raise ParameterError(f"bad epsilon range {text!r}")
    return values


def _seed(args) -> int:
    seed, source = resolve_seed(args.seed)
    if source != "flag":
        print(f"# seed={seed} source={source}", file=sys.stderr)
    return seed


def cmd_stats(args) -> int:
    g, report, labels = load_labeled_edge_list(args.graph, largest=args.largest_component)
    connected = is_connected(g)
    fields = {"n": g.n, "m": g.m}
    stats = degree_stats(g)
    if connected and g.n > 1:
        dia, avg = distance_summary(g)
        fields.update(diameter=dia, avg_distance=f"{avg:.2f}")
    else:
        fields.update(diameter="undefined", avg_distance="undefined")
    fields.update(connected=str(connected).lower(), min_degree=stats.min_degree,
                  distinct_degrees=stats.distinct_degree_count)
    if connected and g.n > 1:
        fields["diameter_bound"] = diameter_upper_bound(stats, g.n, fields["diameter"])
        if g.n <= EDGE_CONNECTIVITY_CAP:
            fields["edge_connectivity"] = edge_connectivity(g)
        else:
            fields["edge_connectivity"] = "skipped"
    print(" ".join(f"{k}={v}" for k, v in fields.items()))
    print(" ".join(f"{k}={v}" for k, v in vars(report).items()))
    if args.pairs_csv:
        d = distance_matrix(g)
        with open(args.pairs_csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u", "v", "distance"])
            for u in range(g.n):
                for v in range(g.n):
                    if u != v:
                        w.writerow([labels[u], labels[v], d[u, v]])
    return 0


def cmd_generate(args) -> int:
    if args.kind == "harary":
        if args.k is None:
            raise ParameterError("harary needs --k")
        g = harary(HararySpec(args.k, args.n))
    else:
        g = {"path": path_graph, "cycle": cycle_graph, "complete": complete_graph}[args.kind](args.n)
    write_edge_list(g, args.output)
    print(f"wrote n={g.n} m={g.m} to {args.output}")
    return 0


def _params(args, n: int):
    delta = args.delta if args.delta is not None else default_delta(n)
    return derive_params(args.eps, delta, ScaleRule(args.scale_rule))


def cmd_sensitivity(args) -> int:
    g, _ = load_edge_list(args.graph, largest=args.largest_component)
    params = _params(args, g.n)
    report = smooth_sensitivity(g, NeighborOp.parse(args.op), params.beta)
    if args.format == "csv":
        print(report.csv_header())
        print(report.to_csv_row())
    else:
        print(report.to_kv())
    return 0


def _vertex(labels: list[str], label: str) -> int:
    try:
        return labels.index(label)
    except ValueError:
        raise GraphError(f"vertex {label!r} not in the cleaned graph") from None


def cmd_query(args) -> int:
    g, _, labels = load_labeled_edge_list(args.graph, largest=args.largest_component)
    u, v = _vertex(labels, args.u), _vertex(labels, args.v)
    seed = _seed(args)
    params = _params(args, g.n)
    mech = MechanismKind.parse(args.mech)
    op = NeighborOp.parse(args.op)
    ans = answer(g, u, v, mech, op, params, make_rng(seed), clamp_lower=args.clamp_lower, seed=seed)
    print(" ".join([args.u, args.v] + [str(x) for x in ans.public_fields()[2:]]))
    return 0


def _parse_harary(text: str) -> HararySpec:
    try:
        k, n = (int(x) for x in text.split(","))
    except ValueError:
        raise ParameterError(f"--harary expects K,N, got {text!r}") from None
    return HararySpec(k, n)


def cmd_experiment(args) -> int:
    seed = _seed(args)
    config = bench.ExperimentConfig(
        op=NeighborOp.parse(args.op),
        epsilon_values=parse_eps_range(args.eps),
        mechanisms=[MechanismKind.parse(m) for m in args.mechs.split(",") if m],
        graph_path=args.graph,
        harary=_parse_harary(args.harary) if args.harary else None,
        dataset=args.dataset,
        delta=args.delta,
        repetitions=args.reps,
        master_seed=seed,
        output=args.out,
        largest_component=args.largest_component,
        scale_rule=ScaleRule(args.scale_rule),
        clamp_lower=args.clamp_lower,
    )
    records = bench.run_experiment(config)
    for p in bench.summarize(records):
        print(f"{p.mechanism} eps={p.epsilon:g} mre_mean={p.mean:.6f} mre_std={p.std:.6f} reps={p.reps}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="privdist", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_arg(p, positional=True):
        if positional:
            p.add_argument("graph", help="edge-list file")
        p.add_argument("--largest-component", action="store_true",
                       help="restrict to the largest connected component after cleaning")

    def privacy_args(p):
        p.add_argument("--eps", type=float, required=True)
        p.add_argument("--delta", type=float, default=None, help="default 1/(10n)")
        p.add_argument("--scale-rule", choices=[r.value for r in ScaleRule], default=ScaleRule.EPSILON.value,
                       help="noise scale = sensitivity/epsilon (default) or sensitivity/alpha")

    p = sub.add_parser("stats", help="dataset statistics")
    graph_arg(p)
    p.add_argument("--pairs-csv", help="also write all ordered-pair distances as CSV")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generate", help="write a synthetic graph")
    p.add_argument("kind", choices=["harary", "path", "cycle", "complete"])
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sensitivity", help="smooth sensitivity report")
    graph_arg(p)
    p.add_argument("--op", choices=["add", "remove"], required=True)
    privacy_args(p)
    p.add_argument("--format", choices=["kv", "csv"], default="kv")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("query", help="answer one private distance query")
    graph_arg(p)
    p.add_argument("--u", required=True, help="vertex label as written in the file")
    p.add_argument("--v", required=True, help="vertex label as written in the file")
    p.add_argument("--op", choices=["add", "remove"], required=True)
    p.add_argument("--mech", choices=["iadp", "adp", "sdp"], default="iadp")
    privacy_args(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--clamp-lower", action="store_true",
                   help="also floor add-edge answers at 1 (extra post-processing)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("experiment", help="epsilon sweep with all-pair MRE")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="edge-list file")
    src.add_argument("--harary", help="K,N for a generated Harary graph")
    p.add_argument("--largest-component", action="store_true")
    p.add_argument("--dataset", help="label for the CSV dataset column")
    p.add_argument("--op", choices=["add", "remove"], required=True)
    p.add_argument("--mechs", default="iadp,adp,sdp")
    p.add_argument("--eps", required=True, help="from:to:step (inclusive) or a,b,c")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV path")
    p.add_argument("--scale-rule", choices=[r.value for r in ScaleRule], default=ScaleRule.EPSILON.value)
    p.add_argument("--clamp-lower", action="store_true")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PrivDistError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[E_IO]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
