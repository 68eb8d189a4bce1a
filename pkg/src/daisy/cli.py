"""Command-line entry point: run, proteome, serve, stats, fetch.

Exit codes: 0 finished (regions found or not), 1 pipeline/run failure,
2 usage error (argparse errors, unknown accessions, bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import clients
from .service import (
    Engine,
    EngineConfig,
    InvalidAccession,
    InvalidSubclass,
    RequestMode,
    ServiceError,
    UnknownRun,
    deterministic_entry_timer,
    render_stats_text,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daisy",
        description="Repeat-protein curation: fetch, classify, detect repeat units, serve.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--data-dir", default="daisy-data",
                       help="state directory (store, cache) [default: %(default)s]")
        p.add_argument("--offline", action="store_true",
                       help="never touch the network; cache misses fail")

    run = sub.add_parser("run", help="process one structure synchronously")
    run.add_argument("accession", help="PDB id or UniProt accession")
    run.add_argument("--subclasses", default=None,
                     help="comma-separated subclass ids; bypasses the classifier")
    run.add_argument("--threshold", type=float, default=0.5,
                     help="probability threshold for subclass selection [default: %(default)s]")
    run.add_argument("--out", default="daisy-out", help="output bundle directory")
    common(run)

    prot = sub.add_parser("proteome", help="process a whole proteome")
    prot.add_argument("proteome_id", help="UniProt proteome id (UP...)")
    prot.add_argument("--parallel", type=int, default=0, help="worker count (0 = cpu count)")
    prot.add_argument("--out", default="daisy-proteome", help="report directory")
    prot.add_argument("--deterministic-timing", action="store_true",
                      help="derive per-entry seconds from content instead of the wall clock")
    common(prot)

    serve = sub.add_parser("serve", help="run the HTTP API server")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static-dir", default=None,
                       help="optional directory of built web UI assets to serve at /")
    common(serve)

    stats = sub.add_parser("stats", help="print the stats table of a stored proteome run")
    stats.add_argument("run_id")
    common(stats)

    fetch = sub.add_parser("fetch", help="fetch a structure file into the cache")
    fetch.add_argument("accession")
    fetch.add_argument("--out", default=None, help="also copy the file here")
    common(fetch)

    return parser


def _engine(args, threshold: float | None = None) -> Engine:
    config = EngineConfig(
        data_dir=Path(args.data_dir),
        offline=True if args.offline else None,
        probability_threshold=threshold if threshold is not None else 0.5,
    )
    return Engine(config)


def _cmd_run(args) -> int:
    if not 0.0 <= args.threshold <= 1.0:
        print("error: --threshold must be in [0, 1]", file=sys.stderr)
        return EXIT_USAGE
    try:
        ref = clients.resolve_accession(args.accession)
    except clients.Unrecognized as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    subclasses = None
    engine = _engine(args, threshold=args.threshold)
    if args.subclasses:
        subclasses = tuple(s.strip() for s in args.subclasses.split(",") if s.strip())
        for sid in subclasses:
            if not engine.taxonomy.is_valid_subclass(sid):
                print(f"usage error: unknown subclass {sid!r}", file=sys.stderr)
                return EXIT_USAGE

    out_dir = Path(args.out)
    try:
        bundle = engine.run_pipeline_to(ref, subclasses, out_dir)
    except Exception as exc:
        print(f"FAILED: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    print(f"accession {ref.value}  ->  {out_dir}")
    total_regions = 0
    for chain_id, report in sorted(bundle.chains.items()):
        regions = report["regions"]
        total_regions += len(regions)
        print(f"chain {chain_id}: {len(regions)} region(s)   "
              f"candidates: {', '.join(c['subclass'] for c in report['candidates']) or '-'}")
        for k, region in enumerate(regions, start=1):
            print(f"  region {k}: subclass {region['classification']}  "
                  f"units {region['unit_count']}  "
                  f"avg RMSD {region['average_rmsd']:.3f} A  "
                  f"level {region['relaxation_level']}  rule {region['rule_satisfied']}")
    if total_regions == 0:
        print("no repeat regions identified")
    return EXIT_OK


def _cmd_proteome(args) -> int:
    engine = _engine(args)
    timer = deterministic_entry_timer if args.deterministic_timing else None
    try:
        run = engine.run_proteome(args.proteome_id,
                                  parallelism=args.parallel or None,
                                  entry_timer=timer)
    except Exception as exc:
        print(f"FAILED: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "entries.json").write_text(
        json.dumps([e.to_dict() for e in run.entries], sort_keys=True, indent=2) + "\n")
    stats_text = (render_stats_text(run.stats, run.proteome_id)
                  if run.stats else "no processed entries\n")
    (out / "stats.txt").write_text(stats_text)
    (out / "stats.json").write_text(
        json.dumps(run.stats.to_dict() if run.stats else None, sort_keys=True, indent=2) + "\n")
    print(f"run {run.run_id}: {len(run.entries)} entries "
          f"({sum(1 for e in run.entries if e.error)} failed)")
    print(stats_text, end="")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .webapi import create_app

    engine = _engine(args)
    static_dir = Path(args.static_dir) if args.static_dir else None
    app = create_app(engine, static_dir=static_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"server failed to start: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_stats(args) -> int:
    engine = _engine(args)
    try:
        run = engine.store.load_run(args.run_id)
    except UnknownRun:
        print(f"unknown run {args.run_id!r}", file=sys.stderr)
        return EXIT_FAILURE
    if run.stats is None:
        print("no processed entries")
        return EXIT_OK
    print(render_stats_text(run.stats, run.proteome_id), end="")
    return EXIT_OK


def _cmd_fetch(args) -> int:
    try:
        ref = clients.resolve_accession(args.accession)
    except clients.Unrecognized as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    engine = _engine(args)
    try:
        record = clients.fetch_structure(ref, engine.fetch_config)
    except clients.ClientError as exc:
        print(f"FAILED: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"{record.path}  (source {record.source.value}, "
          f"{'cache' if record.from_cache else 'downloaded'})")
    if args.out:
        target = Path(args.out)
        if target.is_dir():
            target = target / record.path.name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(record.path.read_bytes())
        print(f"copied to {target}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0

    handlers = {
        "run": _cmd_run,
        "proteome": _cmd_proteome,
        "serve": _cmd_serve,
        "stats": _cmd_stats,
        "fetch": _cmd_fetch,
    }
    try:
        return handlers[args.command](args)
    except (InvalidAccession, InvalidSubclass) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ServiceError as exc:
        print(f"FAILED: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
