"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 exact-solver timeout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .cover import exact_mvc
from .errors import GraphFormatError
from .graph import generate, load_edge_list, write_edge_list
from .harness import (
    ExactGapConfig,
    SweepConfig,
    _preamble,
    _write_csv,
    lambda_rows,
    parse_method,
    record_for,
    run_exact_gap,
    run_sweep,
)

EXIT_USAGE, EXIT_IO, EXIT_TIMEOUT = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    """``3..10`` (step 1), ``3..10:0.5`` or ``3,5,8``."""
    try:
        if ".." in text:
            rng, _, step = text.partition(":")
            lo, hi = (float(x) for x in rng.split(".."))
            step_f = float(step) if step else 1.0
            out, k = [], 0
            while lo + k * step_f <= hi + 1e-9:
                out.append(round(lo + k * step_f, 9))
                k += 1
            return out
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _load(path: str):
    try:
        with open(path, "rb") as fh:
            return load_edge_list(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _method_from(args):
    try:
        return parse_method(args.method, args.update, args.ranking, order=args.order, radius=args.radius,
                            approx_mode=args.approx_mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_generate(args) -> int:
    if args.avg_degree <= 0:
        raise UsageError("--avg-degree must be positive")
    try:
        g = generate(args.model, args.nodes, args.avg_degree, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    header = {"generator": args.model, "nodes": args.nodes, "avg_degree": args.avg_degree,
              "seed": args.seed, "version": __version__}
    if args.output:
        with open(args.output, "w") as fh:
            write_edge_list(g, fh, header)
    else:
        write_edge_list(g, sys.stdout, header)
    return 0


def cmd_break(args) -> int:
    method = _method_from(args)
    g = _load(args.graph)
    rec, trace, cover = record_for(g, method, "file", 2 * g.edge_count / max(g.node_count, 1), None)
    out = vars(rec)
    out.pop("trial")
    out["graph"] = args.graph
    out["ranking"] = method.ranking
    out["deleted_ids"] = [g.labels[v] for v in trace.deleted]
    print(json.dumps(out))
    return 0


def cmd_cover(args) -> int:
    method = _method_from(args)
    g = _load(args.graph)
    rec, _, cover = record_for(g, method, "file", 2 * g.edge_count / max(g.node_count, 1), None)
    out = {"graph": args.graph, "method": rec.method, "deleted": rec.deleted, "matching": rec.matching,
           "cover": rec.cover, "cover_ids": [g.labels[v] for v in cover.cover]}
    if args.exact:
        ex = exact_mvc(g, args.budget)
        if ex.timed_out:
            out["exact"] = None
            print(json.dumps(out))
            print(f"exact solver exceeded {args.budget}s", file=sys.stderr)
            return EXIT_TIMEOUT
        out["exact"] = ex.size
        out["exact_ids"] = [g.labels[v] for v in ex.cover]
    print(json.dumps(out))
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig(models=args.models, degrees=args.degrees, trials=args.trials, nodes=args.nodes,
                      methods=args.methods, base_seed=args.seed, output=args.output, jobs=args.jobs,
                      record_timing=args.record_timing)
    try:
        cfg.specs()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        text = run_sweep(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not args.output:
        sys.stdout.write(text)
    return 0


def cmd_exact_gap(args) -> int:
    cfg = ExactGapConfig(nodes=args.nodes, degrees=args.degrees, trials=args.trials, base_seed=args.seed,
                         method=args.method, budget=args.budget, output=args.output, jobs=args.jobs)
    try:
        parse_method(cfg.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        text = run_exact_gap(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not args.output:
        sys.stdout.write(text)
    return 0


def cmd_lambda(args) -> int:
    if args.max_order < 1:
        raise UsageError("--max-order must be >= 1")
    g = _load(args.graph)
    dense = not args.no_dense and 2 * g.edge_count <= 2000
    cols, rows = lambda_rows(g, args.max_order, dense)
    echo = json.dumps({"graph": args.graph, "max_order": args.max_order, "dense": dense}, sort_keys=True)
    path = Path(args.output) if args.output else None
    text = _write_csv(path, _preamble("lambda", echo), cols, rows)
    if path is None:
        sys.stdout.write(text)
    return 0


def _method_flags(p):
    p.add_argument("--method", default="hl", help="hl, hl-approx, dc, kc, bc, cc, ci, hda, pr, ec")
    p.add_argument("--update", choices=("exact", "approx"), default="exact", help="state update for hl")
    p.add_argument("--order", type=int, default=1, help="walk length l of the Core Influence score")
    p.add_argument("--radius", type=int, default=2, help="ball radius for ci")
    p.add_argument("--approx-mode", choices=("text", "literal"), default="text")
    p.add_argument("--ranking", choices=("static", "adaptive"), default="static",
                   help="static baselines: rank once, or re-rank the residual after every deletion")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corebreak", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a random graph as an edge list")
    p.add_argument("--model", choices=("er", "sf"), required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--avg-degree", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("break", help="break the leaf-removal core and report one JSON record")
    p.add_argument("graph")
    _method_flags(p)
    p.set_defaults(func=cmd_break)

    p = sub.add_parser("cover", help="print the vertex cover built from a core-breaking run")
    p.add_argument("graph")
    _method_flags(p)
    p.add_argument("--exact", action="store_true", help="also solve exactly (small graphs)")
    p.add_argument("--budget", type=float, default=600.0, help="exact solver wall-time limit, seconds")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("sweep", help="multi-method sweep over random graphs, CSV output")
    p.add_argument("--models", type=lambda s: s.split(","), default=["er", "sf"])
    p.add_argument("--degrees", type=_floats, default=_floats("3..10"))
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--nodes", type=int, default=1000)
    p.add_argument("--methods", type=lambda s: s.split(","), default=list(SweepConfig.methods))
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--output")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--record-timing", action="store_true", help="fill elapsed_ms (breaks byte-identical reruns)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("exact-gap", help="heuristic vs exact cover gap on small ER graphs")
    p.add_argument("--nodes", type=_ints, default=[80, 100, 120])
    p.add_argument("--degrees", type=_floats, default=_floats("3..7"))
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", default="hl")
    p.add_argument("--budget", type=float, default=600.0)
    p.add_argument("--output")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_exact_gap)

    p = sub.add_parser("lambda", help="power-method eigenvalue estimates for a graph")
    p.add_argument("graph")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--no-dense", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_lambda)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"corebreak {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphFormatError as exc:
        print(f"corebreak {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"corebreak {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
