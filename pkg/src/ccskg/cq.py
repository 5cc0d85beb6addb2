"""Competency-question verification.

A manifest is an INI file with one section per question::

    [CQ1]
    question = Filter available simulations by emission scenario
    query = queries/cq1.rq
    expect = rowcount 1

``expect`` is ``nonempty``, ``rowcount <n>`` or ``contains ?<var> <term>``.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass
from pathlib import Path

from .config import ConfigError
from .query import QuerySyntaxError, evaluate, parse_query, parse_term
from .rdf.store import GraphStore
from .rdf.terms import Term


@dataclass(frozen=True)
class Expectation:
    kind: str  # "nonempty" | "rowcount" | "contains"
    count: int | None = None
    var: str | None = None
    term: Term | None = None

    def __str__(self) -> str:
        if self.kind == "rowcount":
            return f"rowcount {self.count}"
        if self.kind == "contains":
            return f"contains ?{self.var} {self.term.nt}"
        return "nonempty"


@dataclass(frozen=True)
class CqEntry:
    cq_id: str
    question: str
    query_path: Path
    expect: Expectation


@dataclass(frozen=True)
class CqOutcome:
    entry: CqEntry
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.entry.cq_id}: {self.entry.question} [{self.detail}]"


def parse_expectation(text: str, prefixes: dict[str, str]) -> Expectation:
    text = text.strip()
    if text == "nonempty":
        return Expectation("nonempty")
    m = re.fullmatch(r"rowcount\s+(\d+)", text)
    if m:
        return Expectation("rowcount", count=int(m.group(1)))
    m = re.fullmatch(r"contains\s+[?$](\w+)\s+(.+)", text, re.S)
    if m:
        try:
            term = parse_term(m.group(2), prefixes)
        except QuerySyntaxError as exc:
            raise ConfigError(f"bad term in expectation {text!r}: {exc}") from None
        return Expectation("contains", var=m.group(1), term=term)
    raise ConfigError(f"cannot parse expectation {text!r}")


def load_manifest(path: str | Path, prefixes: dict[str, str]) -> list[CqEntry]:
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc.strerror or exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed manifest {path}: {exc}") from None
    entries = []
    for section in parser.sections():
        body = parser[section]
        missing = [k for k in ("question", "query", "expect") if not body.get(k, "").strip()]
        if missing:
            raise ConfigError(f"[{section}] lacks {', '.join(missing)}")
        query_path = Path(body["query"].strip())
        if not query_path.is_absolute():
            query_path = path.parent / query_path
        entries.append(CqEntry(section, " ".join(body["question"].split()), query_path,
                               parse_expectation(body["expect"], prefixes)))
    return entries


def check(entry: CqEntry, store: GraphStore, prefixes: dict[str, str]) -> CqOutcome:
    try:
        text = entry.query_path.read_text(encoding="utf-8")
    except OSError as exc:
        return CqOutcome(entry, False, f"cannot read query: {exc.strerror or exc}")
    try:
        query = parse_query(text, prefixes)
    except QuerySyntaxError as exc:
        return CqOutcome(entry, False, f"query does not parse: {exc}")
    if query.form != "SELECT":
        return CqOutcome(entry, False, "query is not a SELECT")
    result = evaluate(store, query)
    n = len(result)
    exp = entry.expect
    if exp.kind == "nonempty":
        return CqOutcome(entry, n > 0, f"{exp}; got {n} rows")
    if exp.kind == "rowcount":
        return CqOutcome(entry, n == exp.count, f"{exp}; got {n} rows")
    if exp.var not in result.variables:
        return CqOutcome(entry, False, f"?{exp.var} is not a result variable")
    found = any(row.get(exp.var) == exp.term for row in result.rows)
    return CqOutcome(entry, found, f"{exp}; {'found' if found else 'absent'} in {n} rows")


def run_manifest(entries: list[CqEntry], store: GraphStore, prefixes: dict[str, str]) -> list[CqOutcome]:
    return [check(e, store, prefixes) for e in entries]


def render_report(outcomes: list[CqOutcome]) -> str:
    lines = [o.line() for o in outcomes]
    passed = sum(o.passed for o in outcomes)
    lines.append(f"{passed}/{len(outcomes)} competency questions passed")
    return "\n".join(lines) + "\n"
