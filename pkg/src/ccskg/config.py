"""Pipeline configuration files.

INI syntax, one ``[pipeline]`` section plus one ``[source <name>]`` section per
data source. Relative paths resolve against the file's directory::

    [pipeline]
    base_iri = http://localhost:8000/
    tasks = tasks/C1_subclass.rq
            tasks/C2_derived_variables.rq
    export = build/kg.nq

    [source cmor]
    kind = cmor
    path = sources/CMIP5_Amon.json
           sources/CMIP5_day.json
    graph = cmor
    rules = rules/cmor.rules
    cleansing = skip short_name=clt

``graph`` defaults to the source name. ``tasks`` may name a directory, in
which case its ``*.rq`` files run in file-name order.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .ingest.cleansing import CleansingError, Transform, parse_transform
from .vocab import DEFAULT_BASE_IRI

SOURCE_KINDS = ("cf", "cmor", "cmip_cv", "cordex_domains", "climdex", "cmip5_datasets", "cordex_datasets")
RULE_KINDS = ("cf", "cmor", "cmip_cv", "cordex_domains", "climdex")
_GRAPH_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_\-]*$")


class ConfigError(ValueError):
    pass


@dataclass
class SourceConfig:
    name: str
    kind: str
    paths: list[Path]
    graph: str
    rules: Path | None = None
    cleansing: list[Transform] = field(default_factory=list)


@dataclass
class PipelineConfig:
    base_iri: str = DEFAULT_BASE_IRI
    sources: list[SourceConfig] = field(default_factory=list)
    tasks: list[Path] = field(default_factory=list)
    export: Path | None = None
    origin: Path | None = None

    def ordered_sources(self) -> list[SourceConfig]:
        """Sources in dependency order (CF before CMOR before Climdex, listings last)."""
        rank = {k: i for i, k in enumerate(SOURCE_KINDS)}
        return sorted(self.sources, key=lambda s: (rank[s.kind], s.name))


def _lines(value: str) -> list[str]:
    return [line.strip() for line in value.splitlines() if line.strip()]


def parse_config(text: str, base_dir: Path | None = None) -> PipelineConfig:
    base_dir = Path(base_dir or ".")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None

    def resolve(p: str) -> Path:
        path = Path(p).expanduser()
        return path if path.is_absolute() else base_dir / path

    cfg = PipelineConfig()
    for section in parser.sections():
        body = parser[section]
        if section == "pipeline":
            cfg.base_iri = body.get("base_iri", DEFAULT_BASE_IRI).strip()
            if not re.match(r"^https?://", cfg.base_iri):
                raise ConfigError(f"base_iri {cfg.base_iri!r} is not an http(s) IRI")
            for entry in _lines(body.get("tasks", "")):
                path = resolve(entry)
                if path.is_dir():
                    cfg.tasks.extend(sorted(path.glob("*.rq")))
                else:
                    cfg.tasks.append(path)
            if body.get("export", "").strip():
                cfg.export = resolve(body["export"].strip())
            unknown = set(body) - {"base_iri", "tasks", "export"}
            if unknown:
                raise ConfigError(f"[pipeline] has unknown key(s): {', '.join(sorted(unknown))}")
        elif section.startswith("source "):
            name = section[len("source "):].strip()
            kind = body.get("kind", "").strip()
            if kind not in SOURCE_KINDS:
                raise ConfigError(f"[{section}] kind {kind!r} is not one of {', '.join(SOURCE_KINDS)}")
            paths = [resolve(p) for p in _lines(body.get("path", ""))]
            if not paths:
                raise ConfigError(f"[{section}] needs a path")
            if len(paths) > 1 and kind != "cmor":
                raise ConfigError(f"[{section}] only cmor sources accept several paths")
            graph = body.get("graph", name).strip()
            if not _GRAPH_NAME.match(graph) or graph in ("ontology", "consolidated"):
                raise ConfigError(f"[{section}] graph name {graph!r} is invalid or reserved")
            rules = body.get("rules", "").strip()
            if kind in RULE_KINDS and not rules:
                raise ConfigError(f"[{section}] needs a rules document")
            try:
                cleansing = [parse_transform(line) for line in _lines(body.get("cleansing", ""))]
            except CleansingError as exc:
                raise ConfigError(f"[{section}] {exc}") from None
            unknown = set(body) - {"kind", "path", "graph", "rules", "cleansing"}
            if unknown:
                raise ConfigError(f"[{section}] has unknown key(s): {', '.join(sorted(unknown))}")
            cfg.sources.append(SourceConfig(name, kind, paths, graph, resolve(rules) if rules else None, cleansing))
        else:
            raise ConfigError(f"unknown section [{section}]")
    graphs = [s.graph for s in cfg.sources]
    dupes = sorted({g for g in graphs if graphs.count(g) > 1})
    if dupes:
        raise ConfigError(f"graph name(s) used by more than one source: {', '.join(dupes)}")
    return cfg


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc.strerror or exc}") from None
    cfg = parse_config(text, path.parent)
    cfg.origin = path
    return cfg


def bundled_data_dir() -> Path:
    return Path(str(resources.files("ccskg") / "data"))


def bundled_config_path() -> Path:
    return bundled_data_dir() / "pipeline.conf"
