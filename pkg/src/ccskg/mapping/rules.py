"""Declarative record-to-quad mapping rules.

Rule documents are line oriented::

    # comment
    rule <id> <record-kind>
        subject <iri-template>
        class <curie> [<curie> ...]
        literal <predicate> <template> [^^<datatype> | @<lang>]
        iri <predicate> <iri-template>
        const <predicate> <curie | <iri> | "text">
        graph <graph-name>
    end

Templates substitute ``{field}`` placeholders from the record. IRI templates
are either prefixed (``mip:{short_name}``) or absolute (``<http://...{x}>``);
values are percent-encoded before substitution. A map whose field is absent
(None or empty) emits nothing; a list-valued field emits one quad per item.
"""
from __future__ import annotations

import itertools
import re
import shlex
from dataclasses import dataclass, field
from urllib.parse import quote

from ..ingest.records import RECORD_KINDS, WarningLog
from ..rdf.terms import RDF_TYPE, XSD_STRING, Iri, Literal, Quad, Term, TermError
from ..vocab import VocabError, Vocabulary

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


class RuleError(ValueError):
    def __init__(self, message: str, rule: str | None = None, line: int | None = None) -> None:
        where = []
        if rule:
            where.append(f"rule {rule}")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.rule = rule
        self.line = line


@dataclass(frozen=True)
class Template:
    """A string with ``{field}`` placeholders; ``prefix`` is prepended verbatim."""

    prefix: str
    pattern: str
    is_iri: bool

    @property
    def fields(self) -> tuple[str, ...]:
        return tuple(_PLACEHOLDER.findall(self.pattern))

    def expand(self, values: dict[str, object]) -> list[str]:
        names = self.fields
        choices = []
        for name in names:
            value = values.get(name)
            if value is None or value == "" or value == ():
                return []
            items = value if isinstance(value, (list, tuple)) else [value]
            choices.append([_format(v) for v in items])
        out = []
        for combo in itertools.product(*choices):
            lookup = dict(zip(names, combo))
            text = _PLACEHOLDER.sub(
                lambda m: quote(lookup[m.group(1)], safe="-._~") if self.is_iri else lookup[m.group(1)],
                self.pattern,
            )
            out.append(self.prefix + text)
        return out


def _format(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass(frozen=True)
class ObjectMap:
    predicate: Iri
    kind: str  # "literal" | "iri" | "const"
    template: Template | None = None
    datatype: str = XSD_STRING
    language: str | None = None
    constant: Term | None = None


@dataclass(frozen=True)
class MappingRule:
    rule_id: str
    record_kind: str
    subject: Template
    classes: tuple[Iri, ...] = ()
    maps: tuple[ObjectMap, ...] = ()
    graph: str | None = None


@dataclass
class RuleSet:
    rules: list[MappingRule] = field(default_factory=list)
    prefixes: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def for_kind(self, kind: str) -> list[MappingRule]:
        return [r for r in self.rules if r.record_kind == kind]


class _Compiler:
    def __init__(self, vocab: Vocabulary) -> None:
        self.vocab = vocab

    def iri_template(self, text: str, rule: str, line: int) -> Template:
        if text.startswith("<") and text.endswith(">"):
            return Template("", text[1:-1], True)
        prefix, sep, local = text.partition(":")
        if not sep:
            raise RuleError(f"IRI template {text!r} is neither <...> nor prefixed", rule, line)
        if prefix not in self.vocab.prefixes:
            raise RuleError(f"unknown prefix {prefix!r}", rule, line)
        if "{" not in local:
            # a fixed prefixed name must be a known term when in an ontology namespace
            self.term_iri(text, rule, line)
        return Template(self.vocab.prefixes[prefix], local, True)

    def term_iri(self, curie: str, rule: str, line: int) -> Iri:
        if curie.startswith("<") and curie.endswith(">"):
            try:
                return Iri(curie[1:-1])
            except TermError as exc:
                raise RuleError(str(exc), rule, line) from None
        try:
            return self.vocab.iri(curie)
        except (VocabError, TermError) as exc:
            raise RuleError(str(exc), rule, line) from None

    def constant(self, text: str, rule: str, line: int) -> Term:
        if text.startswith('"'):
            m = re.fullmatch(r'"(.*)"(?:@([A-Za-z\-0-9]+)|\^\^(\S+))?', text, re.S)
            if not m:
                raise RuleError(f"bad literal constant {text!r}", rule, line)
            if m.group(2):
                return Literal(m.group(1), language=m.group(2))
            if m.group(3):
                return Literal(m.group(1), self.term_iri(m.group(3), rule, line).value)
            return Literal(m.group(1))
        return self.term_iri(text, rule, line)

    def compile(self, text: str) -> RuleSet:
        rules: list[MappingRule] = []
        seen: set[str] = set()
        current: dict | None = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                parts = shlex.split(stripped, posix=False)
            except ValueError as exc:
                raise RuleError(str(exc), current and current["id"], lineno) from None
            keyword, args = parts[0], parts[1:]
            rid = current["id"] if current else None
            if keyword == "rule":
                if current is not None:
                    raise RuleError("nested rule (missing 'end')", rid, lineno)
                if len(args) != 2:
                    raise RuleError("expected 'rule <id> <record-kind>'", None, lineno)
                rid, kind = args
                if rid in seen:
                    raise RuleError("duplicate rule id", rid, lineno)
                if kind not in RECORD_KINDS:
                    raise RuleError(f"unknown record kind {kind!r}", rid, lineno)
                seen.add(rid)
                current = {"id": rid, "kind": kind, "subject": None, "classes": [], "maps": [], "graph": None,
                           "line": lineno}
                continue
            if current is None:
                raise RuleError(f"{keyword!r} outside a rule", None, lineno)
            if keyword == "end":
                rules.append(self.finish(current))
                current = None
            elif keyword == "subject":
                if len(args) != 1:
                    raise RuleError("expected 'subject <template>'", rid, lineno)
                current["subject"] = self.iri_template(args[0], rid, lineno)
                self.check_fields(current, current["subject"], lineno)
            elif keyword == "class":
                if not args:
                    raise RuleError("expected at least one class", rid, lineno)
                current["classes"].extend(self.term_iri(a, rid, lineno) for a in args)
            elif keyword == "graph":
                if len(args) != 1:
                    raise RuleError("expected 'graph <name>'", rid, lineno)
                current["graph"] = args[0]
            elif keyword in ("literal", "iri", "const"):
                if len(args) < 2:
                    raise RuleError(f"expected '{keyword} <predicate> <object>'", rid, lineno)
                predicate = self.term_iri(args[0], rid, lineno)
                if keyword == "const":
                    # a quoted literal may be split from its @lang / ^^datatype suffix
                    term = self.constant("".join(args[1:]), rid, lineno)
                    current["maps"].append(ObjectMap(predicate, "const", constant=term))
                elif keyword == "iri":
                    if len(args) != 2:
                        raise RuleError("iri takes exactly one template", rid, lineno)
                    tmpl = self.iri_template(args[1], rid, lineno)
                    self.check_fields(current, tmpl, lineno)
                    current["maps"].append(ObjectMap(predicate, "iri", template=tmpl))
                else:
                    body = args[1]
                    if body.startswith('"') and body.endswith('"') and len(body) >= 2:
                        body = body[1:-1]
                    tmpl = Template("", body, False)
                    self.check_fields(current, tmpl, lineno)
                    datatype, language = XSD_STRING, None
                    for extra in args[2:]:
                        if extra.startswith("^^"):
                            datatype = self.term_iri(extra[2:], rid, lineno).value
                        elif extra.startswith("@"):
                            language = extra[1:]
                        else:
                            raise RuleError(f"unexpected {extra!r} after literal template", rid, lineno)
                    current["maps"].append(ObjectMap(predicate, "literal", tmpl, datatype, language))
            else:
                raise RuleError(f"unknown directive {keyword!r}", rid, lineno)
        if current is not None:
            raise RuleError("unterminated rule (missing 'end')", current["id"], current["line"])
        return RuleSet(rules, dict(self.vocab.prefixes))

    def check_fields(self, current: dict, tmpl: Template, line: int) -> None:
        allowed = RECORD_KINDS[current["kind"]].field_names()
        for name in tmpl.fields:
            if name not in allowed:
                raise RuleError(f"unknown field {{{name}}} for record kind {current['kind']}", current["id"], line)

    def finish(self, current: dict) -> MappingRule:
        if current["subject"] is None:
            raise RuleError("rule has no subject template", current["id"], current["line"])
        return MappingRule(
            current["id"], current["kind"], current["subject"], tuple(current["classes"]),
            tuple(current["maps"]), current["graph"],
        )


def compile_rules(text: str, vocab: Vocabulary) -> RuleSet:
    """Compile a rule document; any error aborts the whole document."""
    return _Compiler(vocab).compile(text)


def merge_rulesets(*rulesets: RuleSet) -> RuleSet:
    merged = RuleSet()
    for rs in rulesets:
        for rule in rs.rules:
            if any(r.rule_id == rule.rule_id for r in merged.rules):
                raise RuleError("duplicate rule id across documents", rule.rule_id)
            merged.rules.append(rule)
        merged.prefixes.update(rs.prefixes)
    return merged


def apply(
    ruleset: RuleSet,
    records,
    vocab: Vocabulary,
    graph: Iri | None = None,
    log: WarningLog | None = None,
) -> set[Quad]:
    """Map records to quads. Result is a set, so record order is irrelevant."""
    log = WarningLog() if log is None else log
    quads: set[Quad] = set()
    for record in records:
        values = record.as_fields()
        for rule in ruleset.for_kind(record.kind):
            target = vocab.minter.graph(rule.graph) if rule.graph else graph
            if target is None:
                raise RuleError("no target graph for rule", rule.rule_id)
            subjects = rule.subject.expand(values)
            if len(subjects) != 1:
                log.warn(rule.rule_id, repr(values.get(next(iter(rule.subject.fields), ""), "")),
                         "subject template did not expand to exactly one IRI", dropped=True)
                continue
            try:
                subject = Iri(subjects[0])
                emitted = [Quad(subject, RDF_TYPE, c, target) for c in rule.classes]
                for m in rule.maps:
                    if m.kind == "const":
                        emitted.append(Quad(subject, m.predicate, m.constant, target))
                    elif m.kind == "iri":
                        emitted.extend(Quad(subject, m.predicate, Iri(v), target) for v in m.template.expand(values))
                    else:
                        emitted.extend(
                            Quad(subject, m.predicate, Literal(v, m.datatype, m.language), target)
                            for v in m.template.expand(values)
                        )
            except TermError as exc:
                log.warn(rule.rule_id, subjects[0], f"record skipped: {exc}", dropped=True)
                continue
            quads.update(emitted)
    return quads
