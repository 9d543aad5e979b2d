"""Command-line surface: dataset generation, query execution, benchmark matrix.

Exit codes: 0 success, 2 usage or parse errors, 3 empty weight region.
Primary results go to stdout; a one-line run summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bench
from .dataset import Distribution, Relation, gen_synthetic, ingest_csv, normalize, parse_schema
from .errors import CsvError, EmptyRegionError, ParseError
from .operators import Kind, QuerySpec, ResultSet, run_query
from .preference import parse_constraints

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_EMPTY_REGION = 3


def _int_list(text: str) -> list[int]:
    return [int(piece) for piece in text.split(",") if piece.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flexsky", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic CSV dataset")
    gen.add_argument("--n", type=int, required=True, help="number of rows")
    gen.add_argument("--d", type=int, required=True, help="number of attributes")
    gen.add_argument("--dist", required=True, choices=[v.value for v in Distribution])
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.set_defaults(func=cmd_gen)

    query = sub.add_parser("query", help="run one operator over a CSV dataset")
    query.add_argument("--in", dest="infile", required=True, help="input CSV path")
    query.add_argument("--op", required=True, choices=[k.value for k in Kind])
    query.add_argument("--schema", required=True, help='attribute list "name:min|max,..."')
    query.add_argument("--constraints", help="weight constraints: a file path or inline text")
    query.add_argument("--weights", help='comma-separated weights, e.g. "0.5,0.5"')
    query.add_argument("--k", type=int)
    query.add_argument("--priority", help='attribute priority order, e.g. "price,perf"')
    query.add_argument("--normalized", action="store_true", help="input is already normalized, min-better")
    query.add_argument("--id-column", dest="id_column", help="column holding tuple ids")
    query.add_argument("--format", choices=["csv", "json"], default="csv")
    query.add_argument("--algo", choices=["naive", "sorted"], default="sorted", help="skyline algorithm")
    query.set_defaults(func=cmd_query)

    bench_p = sub.add_parser("bench", help="run the benchmark matrix")
    bench_p.add_argument("--dists", required=True, help="comma-separated distributions")
    bench_p.add_argument("--ns", type=_int_list, required=True)
    bench_p.add_argument("--ds", type=_int_list, required=True)
    bench_p.add_argument("--constraints-per-cell", dest="ms", type=_int_list, required=True)
    bench_p.add_argument("--seeds", type=_int_list, required=True)
    bench_p.add_argument("--out", required=True, help="output CSV path")
    bench_p.set_defaults(func=cmd_bench)

    return parser


def cmd_gen(args) -> int:
    relation = gen_synthetic(args.n, args.d, Distribution(args.dist), args.seed)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(relation.schema.names) + "\n")
        for row in relation.values:
            handle.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"# wrote {relation.n} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def _load_relation(args) -> Relation:
    schema = parse_schema(args.schema)
    relation = ingest_csv(args.infile, schema, id_column=args.id_column)
    if args.normalized:
        return Relation(schema, relation.ids, relation.values, relation.values)
    return normalize(relation)


def _build_spec(args, schema) -> QuerySpec:
    kind = Kind(args.op)
    constraints = None
    if args.constraints is not None:
        if kind not in (Kind.ND, Kind.PO, Kind.F_SKYBAND):
            raise ValueError(f"--constraints is not accepted by {kind.value}")
        text = args.constraints
        if os.path.isfile(text):
            with open(text, encoding="utf-8") as handle:
                text = handle.read()
        constraints = tuple(parse_constraints(text, schema))
    weights = None
    if args.weights is not None:
        try:
            weights = tuple(float(v) for v in args.weights.split(","))
        except ValueError:
            raise ValueError(f"bad --weights value {args.weights!r}") from None
    priority = tuple(p.strip() for p in args.priority.split(",")) if args.priority else None
    missing = []
    if kind is Kind.TOPK and weights is None:
        missing.append("--weights")
    if kind in (Kind.TOPK, Kind.SKYBAND, Kind.F_SKYBAND) and args.k is None:
        missing.append("--k")
    if kind is Kind.LEX and priority is None:
        missing.append("--priority")
    if missing:
        raise ValueError(f"{kind.value} requires {' and '.join(missing)}")
    return QuerySpec(
        kind=kind,
        k=args.k,
        weights=weights,
        constraints=constraints,
        priority=priority,
        algo=args.algo,
    )


def _emit(result: ResultSet, fmt: str) -> None:
    if fmt == "csv":
        for tuple_id, score in result.entries:
            if score is None:
                print(tuple_id)
            else:
                print(f"{tuple_id},{score!r}")
        return
    payload = {
        "entries": [
            {"id": tuple_id} if score is None else {"id": tuple_id, "score": score}
            for tuple_id, score in result.entries
        ],
        "meta": {
            "op": result.meta.kind.value,
            "n": result.meta.input_size,
            "d": result.meta.dimension,
            "distinct": result.meta.distinct,
            "vertices": result.meta.vertex_count,
            "elapsed_ms": result.meta.elapsed_ms,
        },
    }
    print(json.dumps(payload))


def cmd_query(args) -> int:
    relation = _load_relation(args)
    spec = _build_spec(args, relation.schema)
    result = run_query(relation, spec)
    _emit(result, args.format)
    meta = result.meta
    vertices = meta.vertex_count if meta.vertex_count is not None else "-"
    print(
        f"# op={meta.kind.value} n={meta.input_size} d={meta.dimension} "
        f"out={len(result)} vertices={vertices} elapsed_ms={meta.elapsed_ms:.3f}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    dists = [Distribution(piece.strip()) for piece in args.dists.split(",") if piece.strip()]
    if not dists or not args.ns or not args.ds or not args.ms or not args.seeds:
        raise ValueError("bench needs at least one value per matrix flag")
    if any(n < 1 for n in args.ns) or any(d < 1 for d in args.ds):
        raise ValueError("--ns and --ds entries must be >= 1")
    if any(m < 0 for m in args.ms):
        raise ValueError("--constraints-per-cell entries must be >= 0")
    reports = bench.run_cells(dists, args.ns, args.ds, args.ms, args.seeds)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        count = bench.write_reports(reports, handle)
    print(f"# wrote {count} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EmptyRegionError:
        print("error: empty weight region", file=sys.stderr)
        return EXIT_EMPTY_REGION
    except (CsvError, ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
