"""Command-line entry point: ``ccskg build | cq run | serve | query | stats | export``.

Exit codes: 0 success, 1 CQ or validation failure, 2 I/O or configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, PipelineConfig, bundled_config_path, bundled_data_dir, load_config
from .consolidate import TaskError
from .cq import load_manifest, render_report, run_manifest
from .pipeline import build, export, render_stats
from .query import QuerySyntaxError, evaluate, parse_query, to_json, to_table
from .rdf import RdfSyntaxError, parse_nquads, serialize
from .rdf.store import GraphStore
from .vocab import DEFAULT_BASE_IRI, Vocabulary

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_IO) -> None:
        super().__init__(message)
        self.code = code


def _config(args) -> PipelineConfig:
    cfg = load_config(args.config or bundled_config_path())
    if getattr(args, "base_iri", None):
        cfg.base_iri = args.base_iri
    if getattr(args, "export", None):
        cfg.export = Path(args.export)
    return cfg


def _load_store(path: str) -> GraphStore:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read store {path}: {exc.strerror or exc}") from None
    try:
        return parse_nquads(data)
    except RdfSyntaxError as exc:
        raise CliError(f"store {path} is not valid N-Quads: {exc}") from None


def _store_and_vocab(args) -> tuple[GraphStore, Vocabulary]:
    """A store from ``--store``, else a fresh build of ``--config`` (or the bundled fixture)."""
    if getattr(args, "store", None):
        vocab = Vocabulary(args.base_iri or DEFAULT_BASE_IRI)
        store = _load_store(args.store)
        store.prefixes = vocab.output_prefixes
        return store, vocab
    result = build(_config(args))
    for name, reason in result.failures.items():
        print(f"source {name} failed: {reason}", file=sys.stderr)
    return result.store, result.vocab


def cmd_build(args) -> int:
    cfg = _config(args)
    result = build(cfg)
    if not args.quiet:
        sys.stderr.write(result.warnings.render())
    for name, reason in result.failures.items():
        print(f"FAIL source {name}: {reason}", file=sys.stderr)
    for iri in result.lint:
        print(f"LINT unknown ontology term <{iri}>", file=sys.stderr)
    sys.stdout.write(result.report.render())
    sys.stdout.write(result.stats_lines())
    if cfg.export is not None:
        try:
            export(result.store, cfg.export)
        except OSError as exc:
            raise CliError(f"cannot write {cfg.export}: {exc.strerror or exc}") from None
    return EXIT_OK if result.ok and not result.lint else EXIT_FAIL


def cmd_cq_run(args) -> int:
    store, vocab = _store_and_vocab(args)
    manifest = args.manifest or bundled_data_dir() / "cq-manifest.ini"
    entries = load_manifest(manifest, vocab.prefixes)
    outcomes = run_manifest(entries, store, vocab.prefixes)
    sys.stdout.write(render_report(outcomes))
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


def cmd_query(args) -> int:
    store, vocab = _store_and_vocab(args)
    try:
        text = Path(args.query_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.query_file}: {exc.strerror or exc}") from None
    try:
        query = parse_query(text, vocab.prefixes)
    except QuerySyntaxError as exc:
        raise CliError(f"{args.query_file}: {exc}", EXIT_FAIL) from None
    if query.form != "SELECT":
        raise CliError("query expects a SELECT; use build tasks for updates", EXIT_FAIL)
    for w in query.warnings:
        print(f"warning: {w}", file=sys.stderr)
    result = evaluate(store, query)
    if args.format == "json":
        sys.stdout.write(to_json(result).decode("utf-8") + "\n")
    else:
        sys.stdout.write(to_table(result, vocab.output_prefixes))
    return EXIT_OK


def cmd_stats(args) -> int:
    sys.stdout.write(render_stats(_load_store(args.store)))
    return EXIT_OK


def cmd_export(args) -> int:
    store, vocab = _store_and_vocab(args)
    data = serialize(store, args.format, vocab.output_prefixes)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        try:
            Path(args.output).parent.mkdir(parents=True, exist_ok=True)
            Path(args.output).write_bytes(data)
        except OSError as exc:
            raise CliError(f"cannot write {args.output}: {exc.strerror or exc}") from None
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import LinkedDataApp, make_server

    store, vocab = _store_and_vocab(args)
    app = LinkedDataApp(store, vocab.base_iri, vocab.output_prefixes)
    try:
        server = make_server(app, args.host, args.port)
    except OSError as exc:
        raise CliError(f"cannot bind {args.host}:{args.port}: {exc.strerror or exc}") from None
    print(f"serving {len(store)} quads on http://{args.host}:{server.server_port}/ (base {vocab.base_iri})",
          file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def _source_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--store", help="N-Quads file to load instead of building")
    group.add_argument("--config", help="pipeline configuration (default: bundled fixture)")
    p.add_argument("--base-iri", help="override the configured base IRI")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ccskg", description="Climate projection knowledge graph toolchain")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="WARNING", help="logging level (default WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="ingest, map, consolidate and export")
    p.add_argument("--config", help="pipeline configuration (default: bundled fixture)")
    p.add_argument("--export", help="N-Quads output path (overrides the config)")
    p.add_argument("--base-iri", help="override the configured base IRI")
    p.add_argument("--quiet", action="store_true", help="do not print ingest warnings")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("cq", help="competency-question verification")
    cq_sub = p.add_subparsers(dest="cq_command", required=True)
    run = cq_sub.add_parser("run", help="evaluate every manifest entry")
    _source_args(run)
    run.add_argument("--manifest", help="CQ manifest (default: bundled)")
    run.set_defaults(func=cmd_cq_run)

    p = sub.add_parser("serve", help="SPARQL endpoint and linked-data interface")
    _source_args(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("query", help="run a SELECT query file")
    _source_args(p)
    p.add_argument("query_file")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="per-graph quad counts of an N-Quads store")
    p.add_argument("--store", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="serialize a store as N-Quads or Turtle")
    _source_args(p)
    p.add_argument("--output", "-o", help="output path (default: stdout)")
    p.add_argument("--format", choices=("nquads", "turtle"), default="nquads")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, TaskError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
