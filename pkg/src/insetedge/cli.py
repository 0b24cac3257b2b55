"""Command-line interface: ``insetedge {analyze,query,oracle,gen,bench}``.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 oracle
disagreement, 4 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from typing import Optional, Sequence

from .direct import dprime_lemma1, dprime_lemma2, dprime_shortcut_oracle
from .query import METRICS, build_index, closest, parse_target, top_k
from .sweep import InsetRecord, collect, collect_columns, sweep_all, sweep_parallel
from .tree import (
    GENERATOR_KINDS,
    SizeGuardError,
    Tree,
    TreeError,
    average_distance,
    distance_matrix,
    edge_splits,
    generate,
    parse_tree,
    wiener_from_splits,
)

log = logging.getLogger("insetedge")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_MISMATCH, EXIT_GUARD = 0, 1, 2, 3, 4

ANALYZE_HEADER = ["x", "y", "k", "dprime", "adprime_num", "adprime_den", "adprime"]
BENCH_HEADER = ["family", "n", "m", "wiener", "basic_ops", "ops_per_wiener", "wall_ms"]
# in-memory record limit for analyze/query
MAX_RECORDS = 50_000_000

_DEC = Context(prec=12)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def decimal_str(value: Fraction) -> str:
    return str(_DEC.divide(Decimal(value.numerator), Decimal(value.denominator)))


@dataclass
class RunConfig:
    command: str
    path: Optional[str] = None
    gen: Optional[tuple[str, int]] = None
    seed: int = 0
    output: Optional[str] = None
    format: str = "csv"
    metric: str = "dprime"
    target: Optional[Fraction] = None
    top: Optional[int] = None
    direction: str = "max"
    workers: int = 1
    count_ops: bool = False
    oracle_bound: int = 500


def _parse_gen(spec: str) -> tuple[str, int]:
    kind, _, n = spec.partition(":")
    if kind not in GENERATOR_KINDS or not n.isdigit():
        raise argparse.ArgumentTypeError(f"expected KIND:N with KIND in {GENERATOR_KINDS}, got {spec!r}")
    return kind, int(n)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", nargs="?", help="tree edge-list file ('-' for stdin)")
    p.add_argument("--gen", type=_parse_gen, metavar="KIND:N", help="generate the input tree instead")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="insetedge", description="Wiener-index effect of every inset edge of a tree.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="decrease of D and AD for every inset edge")
    _add_input(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--count-ops", action="store_true")

    p = sub.add_parser("query", help="inset edges closest to a target, or the top-k")
    _add_input(p)
    p.add_argument("--target")
    p.add_argument("--metric", choices=METRICS, default="dprime")
    p.add_argument("--top", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--max", dest="direction", action="store_const", const="max")
    g.add_argument("--min", dest="direction", action="store_const", const="min")
    p.set_defaults(direction="max")
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("oracle", help="cross-check the sweep against three direct evaluators")
    _add_input(p)
    p.add_argument("--oracle-bound", type=int, default=500)

    p = sub.add_parser("gen", help="write a generated tree")
    p.add_argument("kind", choices=GENERATOR_KINDS)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")

    p = sub.add_parser("bench", help="operation counts against the Wiener index")
    p.add_argument("--families", default="path,star,random")
    p.add_argument("--sizes", default="125,250,500,1000,2000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count-ops", action="store_true", help="accepted for symmetry; bench always counts")
    p.add_argument("-o", "--output")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, seed=getattr(args, "seed", 0))
    cfg.output = getattr(args, "output", None)
    if args.command in ("analyze", "query", "oracle"):
        if (args.path is None) == (args.gen is None):
            raise UsageError("give exactly one input: a tree file or --gen KIND:N")
        cfg.path, cfg.gen = args.path, args.gen
    if args.command == "analyze":
        cfg.format, cfg.workers, cfg.count_ops = args.format, args.workers, args.count_ops
    if args.command == "query":
        cfg.metric, cfg.direction, cfg.workers, cfg.top = args.metric, args.direction, args.workers, args.top
        if (args.target is None) == (args.top is None):
            raise UsageError("query needs exactly one of --target or --top")
        if args.target is not None:
            try:
                cfg.target = parse_target(args.target)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    if args.command == "oracle":
        cfg.oracle_bound = args.oracle_bound
    if getattr(args, "workers", 1) < 1:
        raise UsageError("--workers must be at least 1")
    return cfg


def load_tree(cfg: RunConfig) -> Tree:
    if cfg.gen is not None:
        kind, n = cfg.gen
        return generate(kind, n, cfg.seed)
    if cfg.path == "-":
        return parse_tree(sys.stdin.buffer.read())
    with open(cfg.path, "rb") as fh:
        return parse_tree(fh.read())


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records(tree: Tree, splits, workers: int, check_only: bool = False) -> list[InsetRecord]:
    m = tree.n * (tree.n - 1) // 2 - (tree.n - 1)
    if m > MAX_RECORDS:
        raise SizeGuardError(f"{m} inset edges exceed the in-memory limit of {MAX_RECORDS}")
    if check_only:
        return []
    if workers > 1:
        return sweep_parallel(tree, splits, workers)
    return collect(tree, splits)


def _row(tree: Tree, r: InsetRecord, pairs: int) -> list:
    ad = Fraction(r.dprime, pairs)
    return [tree.labels[r.x], tree.labels[r.y], r.k, r.dprime, ad.numerator, ad.denominator, decimal_str(ad)]


def format_analyze(tree: Tree, records: Sequence[InsetRecord], wiener: int, fmt: str) -> str:
    pairs = tree.n * (tree.n - 1) // 2
    rows = [_row(tree, r, pairs) for r in records]
    if fmt == "json":
        avg = average_distance(wiener, tree.n)
        meta = {"n": tree.n, "m": len(records), "wiener": wiener, "avg_distance": f"{avg.numerator}/{avg.denominator}"}
        payload = {"meta": meta, "records": [dict(zip(ANALYZE_HEADER, row)) for row in rows]}
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ANALYZE_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def read_analyze(text: str) -> list[tuple[str, str, int, int]]:
    """Parse analyze output (either format) back into ``(x, y, k, dprime)`` rows."""
    if text.lstrip().startswith("{"):
        rows = json.loads(text)["records"]
        return [(r["x"], r["y"], int(r["k"]), int(r["dprime"])) for r in rows]
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ANALYZE_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    return [(r["x"], r["y"], int(r["k"]), int(r["dprime"])) for r in reader]


def cmd_analyze(cfg: RunConfig) -> int:
    tree = load_tree(cfg)
    splits = edge_splits(tree)
    wiener = wiener_from_splits(splits)
    t0 = time.perf_counter()
    if cfg.count_ops and cfg.workers == 1:
        _records(tree, splits, 1, check_only=True)
        rows: list[tuple[int, int, int, int]] = []
        stats = sweep_all(tree, splits, lambda *r: rows.append(r))
        rows.sort()
        records = [InsetRecord(*r) for r in rows]
        log.info("basic_ops=%d ops_per_wiener=%.6f", stats.basic_ops, stats.basic_ops / wiener)
    else:
        records = _records(tree, splits, cfg.workers)
    log.debug("sweep took %.3fs", time.perf_counter() - t0)
    _write(cfg, format_analyze(tree, records, wiener, cfg.format))
    avg = average_distance(wiener, tree.n)
    summary = f"n={tree.n} m={len(records)} D(T)={wiener} AD(T)={avg} ({decimal_str(avg)})"
    if records:
        summary += f" max_dprime={max(r.dprime for r in records)} min_dprime={min(r.dprime for r in records)}"
    print(summary, file=sys.stderr)
    if not records:
        print("warning: no inset edges", file=sys.stderr)
    return EXIT_OK


def cmd_query(cfg: RunConfig) -> int:
    tree = load_tree(cfg)
    splits = edge_splits(tree)
    _records(tree, splits, 1, check_only=True)
    columns = collect_columns(tree, splits, cfg.workers)
    if not len(columns):
        print("error: no inset edges to query", file=sys.stderr)
        return EXIT_INPUT
    index = build_index(columns, tree.n)
    pairs = index.pairs
    if cfg.target is not None:
        result = closest(index, cfg.target, cfg.metric)
        chosen, dev = result.records, result.deviation
    else:
        if not 1 <= cfg.top <= len(index):
            raise UsageError(f"--top must be within 1..{len(index)}")
        chosen = top_k(index, cfg.top, cfg.direction)
        dev = None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ANALYZE_HEADER + (["deviation"] if dev is not None else []))
    for r in chosen:
        w.writerow(_row(tree, r, pairs) + ([str(dev)] if dev is not None else []))
    _write(cfg, buf.getvalue())
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    tree = load_tree(cfg)
    if tree.n > cfg.oracle_bound:
        print(f"error: n={tree.n} exceeds --oracle-bound {cfg.oracle_bound}", file=sys.stderr)
        return EXIT_GUARD
    splits = edge_splits(tree)
    dist = distance_matrix(tree)
    records = collect(tree, splits)
    for r in records:
        got = (
            r.dprime,
            dprime_lemma2(tree, r.x, r.y, splits),
            dprime_lemma1(tree, r.x, r.y, dist),
            dprime_shortcut_oracle(tree, r.x, r.y, dist),
        )
        if len(set(got)) != 1:
            x, y = tree.labels[r.x], tree.labels[r.y]
            print(f"MISMATCH x={x} y={y} k={r.k} sweep={got[0]} lemma2={got[1]} lemma1={got[2]} shortcut={got[3]}")
            return EXIT_MISMATCH
    print(f"OK m={len(records)}")
    return EXIT_OK


def cmd_gen(cfg: RunConfig, kind: str, n: int) -> int:
    if n < 2:
        print("error: n must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    _write(cfg, generate(kind, n, cfg.seed).to_text())
    return EXIT_OK


def bench_rows(families: Sequence[str], sizes: Sequence[int], seed: int = 0) -> list[list]:
    rows = []
    for family in families:
        for n in sizes:
            tree = generate(family, n, seed)
            t0 = time.perf_counter()
            splits = edge_splits(tree)
            stats = sweep_all(tree, splits, lambda *r: None)
            wall_ms = (time.perf_counter() - t0) * 1000
            wiener = wiener_from_splits(splits)
            rows.append([family, n, stats.records, wiener, stats.basic_ops, f"{stats.basic_ops / wiener:.6f}", f"{wall_ms:.1f}"])
    return rows


def cmd_bench(cfg: RunConfig, families: Sequence[str], sizes: Sequence[int]) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for row in bench_rows(families, sizes, cfg.seed):
        w.writerow(row)
        log.debug("bench %s", row)
    _write(cfg, buf.getvalue())
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    try:
        cfg = config_from_args(args)
        if cfg.command == "analyze":
            return cmd_analyze(cfg)
        if cfg.command == "query":
            return cmd_query(cfg)
        if cfg.command == "oracle":
            return cmd_oracle(cfg)
        if cfg.command == "gen":
            return cmd_gen(cfg, args.kind, args.n)
        families = [f for f in args.families.split(",") if f]
        try:
            sizes = [int(s) for s in args.sizes.split(",") if s]
        except ValueError:
            raise UsageError(f"bad --sizes {args.sizes!r}") from None
        for f in families:
            if f not in GENERATOR_KINDS:
                raise UsageError(f"unknown family {f!r}")
        if any(n < 2 for n in sizes):
            raise UsageError("sizes must be at least 2")
        return cmd_bench(cfg, families, sizes)
    except UsageError as exc:
        print(f"insetedge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeGuardError as exc:
        print(f"insetedge: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (TreeError, OSError, UnicodeDecodeError) as exc:
        print(f"insetedge: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
