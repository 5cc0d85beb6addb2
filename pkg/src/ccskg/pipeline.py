"""The build workflow: ingest each source, map it into its named graph,
consolidate, export."""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .config import PipelineConfig, SourceConfig
from .consolidate import TaskError, TaskReport, load_tasks, run_all
from .ingest import (
    SourceError,
    WarningLog,
    apply_transforms,
    merge_mip_variables,
    parse_cf_table,
    parse_climdex,
    parse_cmip_cv,
    parse_cmor_table,
    parse_cordex_domains,
    parse_dataset_listing,
)
from .ingest.cleansing import CleansingError
from .mapping import RuleError, apply, compile_rules, map_drs
from .rdf import RDF_TYPE, GraphStore, serialize_nquads
from .vocab import Vocabulary

logger = logging.getLogger(__name__)


@dataclass
class BuildResult:
    store: GraphStore
    vocab: Vocabulary
    warnings: WarningLog = field(default_factory=WarningLog)
    failures: dict[str, str] = field(default_factory=dict)
    report: TaskReport = field(default_factory=TaskReport)
    lint: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def stats_lines(self) -> str:
        return render_stats(self.store)


def render_stats(store: GraphStore) -> str:
    return "".join(f"GRAPH {g.value} {n}\n" for g, n in store.stats().items())


class _Context:
    """Facts earlier sources contribute to later ones."""

    def __init__(self) -> None:
        self.cf_names: set[str] | None = None
        self.mip_names: set[str] | None = None
        self.models: set[str] = set()
        self.domains: dict[str, str] = {}


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise SourceError(f"cannot read {path}: {exc.strerror or exc}") from None


def _ingest(src: SourceConfig, ctx: _Context, log: WarningLog) -> list:
    if src.kind == "cf":
        records = parse_cf_table(_read(src.paths[0]), log)
    elif src.kind == "cmor":
        tables = [parse_cmor_table(_read(p), ctx.cf_names, log) for p in src.paths]
        records = merge_mip_variables(tables)
    elif src.kind == "cmip_cv":
        institutions, models = parse_cmip_cv(_read(src.paths[0]), log)
        records = [*institutions, *models]
    elif src.kind == "cordex_domains":
        records = parse_cordex_domains(_read(src.paths[0]), log)
    elif src.kind == "climdex":
        records = parse_climdex(_read(src.paths[0]), ctx.mip_names, log)
    else:
        project = "cmip5" if src.kind == "cmip5_datasets" else "cordex"
        records = parse_dataset_listing(_read(src.paths[0]), project, log)
    return apply_transforms(records, src.cleansing, src.name, log)


def _remember(src: SourceConfig, records: list, ctx: _Context) -> None:
    if src.kind == "cf":
        ctx.cf_names = {r.standard_name for r in records}
    elif src.kind == "cmor":
        ctx.mip_names = {r.short_name for r in records}
    elif src.kind == "cmip_cv":
        ctx.models.update(r.model_id for r in records if r.kind == "model")
    elif src.kind == "cordex_domains":
        ctx.domains.update((r.name, str(r.resolution)) for r in records)


def _fill_domain_resolution(records: list, ctx: _Context, log: WarningLog, source: str) -> list:
    """CORDEX listings rarely carry a resolution; the domain table supplies it."""
    out = []
    for rec in records:
        if rec.geodetic_resolution is None and rec.drs.domain:
            res = ctx.domains.get(rec.drs.domain)
            if res is None:
                log.warn(source, rec.dataset_id, f"domain {rec.drs.domain} not in the domain table; no geodetic axis")
            else:
                rec = dataclasses.replace(rec, geodetic_resolution=res)
        out.append(rec)
    return out


def build(config: PipelineConfig, log: WarningLog | None = None) -> BuildResult:
    """Run ingest, mapping and consolidation; the export step is left to the caller."""
    vocab = Vocabulary(config.base_iri)
    store = GraphStore(vocab.emit_ontology_graph(), prefixes=vocab.output_prefixes)
    result = BuildResult(store, vocab, WarningLog() if log is None else log)
    ctx = _Context()
    for src in config.ordered_sources():
        graph = vocab.minter.graph(src.graph)
        try:
            records = _ingest(src, ctx, result.warnings)
            _remember(src, records, ctx)
            if src.kind in ("cmip5_datasets", "cordex_datasets"):
                if src.kind == "cordex_datasets":
                    records = _fill_domain_resolution(records, ctx, result.warnings, src.name)
                quads = map_drs(records, vocab, graph, ctx.models, result.warnings)
            else:
                ruleset = compile_rules(src.rules.read_text(encoding="utf-8"), vocab)
                quads = apply(ruleset, records, vocab, graph, result.warnings)
        except (SourceError, RuleError, CleansingError, OSError) as exc:
            result.failures[src.name] = str(exc)
            logger.error("source %s failed: %s", src.name, exc)
            continue
        store.update(quads)
        logger.info("source %s: %d records, %d quads", src.name, len(records), len(quads))

    tasks = load_tasks(config.tasks, vocab)
    result.report = run_all(store, tasks, result.warnings)
    predicates_and_classes = {q.predicate for q in store} | {q.object for q in store.match(predicate=RDF_TYPE)}
    result.lint = vocab.unknown_terms(predicates_and_classes)
    return result


def export(store: GraphStore, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(serialize_nquads(store))


__all__ = ["BuildResult", "TaskError", "build", "export", "render_stats"]
