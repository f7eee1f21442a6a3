"""Command-line entry points: build indices, serve the HTTP API, run the latency bench."""

from __future__ import annotations

import argparse
import gc
import hashlib
import json
import socket
import sys
from dataclasses import replace
from pathlib import Path

from . import bench as bench_mod
from . import indexstore
from .ingest import CorpusStats, IngestError, load_corpus, load_kb
from .model import ScoringParams


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _print_stats(stats: CorpusStats) -> None:
    print(f"tables: {stats.table_count}")
    print(f"entities: {stats.entity_count}")
    print(f"dropped entities (no abstract): {stats.dropped_entities}")
    print(f"dangling links cleared: {stats.dangling_links}")
    print(f"label vocabulary size: {stats.label_vocabulary_size}")
    print(f"line errors: kb={stats.kb_line_errors} corpus={stats.corpus_line_errors}")
    if stats.duplicate_entities or stats.duplicate_tables:
        print(
            f"duplicates (last wins): entities={stats.duplicate_entities} "
            f"tables={stats.duplicate_tables}"
        )


def cmd_build(args: argparse.Namespace) -> int:
    corpus_path = Path(args.corpus)
    kb_path = Path(args.kb)
    for path in (corpus_path, kb_path):
        if not path.is_file():
            print(f"error: input file not found: {path}", file=sys.stderr)
            return 1
    try:
        records, stats = load_kb(kb_path)
        tables, stats = load_corpus(corpus_path, set(records), stats)
        bundle = indexstore.build_indexes(tables.values(), records.values())
        built_from = {
            "corpus": {"path": str(corpus_path), "sha256": _sha256_file(corpus_path)},
            "kb": {"path": str(kb_path), "sha256": _sha256_file(kb_path)},
        }
        indexstore.persist(bundle, args.out, built_from=built_from)
    except (IngestError, indexstore.IndexFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _print_stats(stats)
    print(f"index written to {args.out}")
    return 0


def _load_frozen(index_dir: str) -> indexstore.IndexBundle:
    """Load a bundle and move it to the permanent GC generation.

    The loaded index is immutable and large; excluding it from collector
    scans keeps request latency free of full-collection pauses.
    """
    bundle = indexstore.load(index_dir)
    gc.collect()
    gc.freeze()
    return bundle


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        bundle = _load_frozen(args.index)
    except indexstore.IndexFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError:
        print(f"error: port {args.port} is already in use", file=sys.stderr)
        return 1
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    app = create_app(bundle, params=_params_from_args(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _params_from_args(args: argparse.Namespace) -> ScoringParams:
    params = ScoringParams()
    if getattr(args, "top_k", None):
        params = replace(params, top_k_tables=args.top_k)
    return params


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        bundle = _load_frozen(args.index)
    except indexstore.IndexFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    manifest_blob = json.dumps(bundle.manifest, sort_keys=True).encode()
    fingerprint = hashlib.sha256(manifest_blob).hexdigest()

    seeds = []
    if args.seeds:
        try:
            seeds.extend(bench_mod.load_seeds_file(args.seeds))
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            print(f"error: cannot read seeds file {args.seeds}: {exc}", file=sys.stderr)
            return 1
    if args.sample:
        seeds.extend(bench_mod.sample_seeds(bundle, args.sample, args.rng_seed))
    if not seeds:
        print("error: no seeds; pass --seeds FILE and/or --sample N", file=sys.stderr)
        return 1

    sizes = [int(s) for s in args.sizes.split(",") if s]
    report = bench_mod.run_bench(
        bundle,
        seeds,
        mode=args.mode,
        sizes=sizes,
        repeats=args.repeats,
        params=_params_from_args(args),
        corpus_fingerprint=fingerprint,
        limit=args.limit,
    )
    print(report.human_table())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(report.to_json(), handle, indent=2, sort_keys=True)
            handle.write("\n")
        print(f"report written to {args.json}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tablecomplete",
        description="Table completion engine: index building, serving, benchmarking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build indices from corpus and KB files")
    p_build.add_argument("--corpus", required=True, help="corpus JSON Lines file")
    p_build.add_argument("--kb", required=True, help="knowledge-base JSON Lines file")
    p_build.add_argument("--out", required=True, help="output index directory")
    p_build.set_defaults(func=cmd_build)

    p_serve = sub.add_parser("serve", help="serve the HTTP API from a built index")
    p_serve.add_argument("--index", required=True, help="index directory")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--top-k", type=int, default=None, help="override related-table cap")
    p_serve.set_defaults(func=cmd_serve)

    p_bench = sub.add_parser("bench", help="measure engine latency over seed sizes")
    p_bench.add_argument("--index", required=True, help="index directory")
    p_bench.add_argument("--mode", choices=bench_mod.MODES, required=True)
    p_bench.add_argument("--sizes", default="1,2,3,4,5", help="comma-separated seed sizes")
    p_bench.add_argument("--repeats", type=int, default=10)
    p_bench.add_argument("--seeds", default=None, help="JSON Lines file of seed tables")
    p_bench.add_argument("--sample", type=int, default=0, help="sample N seeds from the corpus")
    p_bench.add_argument("--rng-seed", type=int, default=13, dest="rng_seed")
    p_bench.add_argument("--json", default=None, help="write the machine-readable report here")
    p_bench.add_argument("--limit", type=int, default=bench_mod.DEFAULT_SUGGESTION_LIMIT)
    p_bench.add_argument(
        "--top-k",
        type=int,
        default=None,
        help="related-table cap per retrieval route; set >= corpus size to consider all",
    )
    p_bench.set_defaults(func=cmd_bench)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
