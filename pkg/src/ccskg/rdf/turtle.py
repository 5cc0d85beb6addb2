"""Turtle subset writer/reader.

The writer emits prefixed names, ``a``, ``;``/``,`` abbreviations and
``^^``/``@`` literals. Named graphs are written as TriG-style ``<g> { ... }``
blocks so a whole store round-trips; triples outside any block are read into
a caller-supplied default graph. The reader accepts what the writer produces
plus bare numeric and boolean literals.
"""
from __future__ import annotations

import re
from collections import defaultdict
from collections.abc import Iterable

from .namespace import compact_iri
from .nquads import DEFAULT_GRAPH, RdfSyntaxError, unescape_iri, unescape_string
from .store import GraphStore
from .terms import (
    RDF_TYPE,
    XSD,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Quad,
    Term,
    TermError,
    escape_string,
)


def _term_text(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return compact_iri(term.value, prefixes) or term.nt
    if isinstance(term, BlankNode):
        return term.nt
    text = f'"{escape_string(term.lexical)}"'
    if term.language is not None:
        return f"{text}@{term.language}"
    if term.datatype == XSD_STRING:
        return text
    return f"{text}^^{compact_iri(term.datatype, prefixes) or '<' + term.datatype + '>'}"


def _write_triples(triples: Iterable[tuple[Term, Term, Term]], prefixes: dict[str, str], indent: str) -> list[str]:
    by_subject: dict[Term, dict[Term, list[Term]]] = defaultdict(lambda: defaultdict(list))
    for s, p, o in triples:
        by_subject[s][p].append(o)
    lines = []
    for s in sorted(by_subject, key=lambda t: t.nt):
        preds = by_subject[s]
        # rdf:type first, then the rest in codepoint order
        order = sorted(preds, key=lambda p: (p != RDF_TYPE, p.nt))
        parts = []
        for p in order:
            verb = "a" if p == RDF_TYPE else _term_text(p, prefixes)
            objs = ", ".join(_term_text(o, prefixes) for o in sorted(preds[p], key=lambda t: t.nt))
            parts.append(f"{verb} {objs}")
        body = f" ;\n{indent}    ".join(parts)
        lines.append(f"{indent}{_term_text(s, prefixes)} {body} .")
    return lines


def _prefix_lines(prefixes: dict[str, str]) -> list[str]:
    return [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]


def serialize_turtle(store: GraphStore, prefixes: dict[str, str] | None = None, graphs: bool = True) -> bytes:
    """Write ``store`` as Turtle.

    With ``graphs=False`` the union of all graphs is written as plain triples
    (graph names are lost); otherwise each named graph becomes a block.
    """
    prefixes = dict(store.prefixes if prefixes is None else prefixes)
    out = _prefix_lines(prefixes)
    if out:
        out.append("")
    if graphs:
        for g in store.graphs():
            triples = [q.triple for q in store.match(graph=g)]
            out.append(f"{_term_text(g, prefixes)} {{")
            out.extend(_write_triples(triples, prefixes, "    "))
            out.append("}")
            out.append("")
    else:
        out.extend(_write_triples(store.triples(), prefixes, ""))
    text = "\n".join(out)
    if text and not text.endswith("\n"):
        text += "\n"
    return text.encode("utf-8")


def serialize_turtle_triples(triples: Iterable[tuple[Term, Term, Term]], prefixes: dict[str, str]) -> bytes:
    triples = set(triples)
    used = {}
    for t in (x for tr in triples for x in tr):
        for candidate in ([t.value] if isinstance(t, Iri) else [t.datatype] if isinstance(t, Literal) else []):
            curie = compact_iri(candidate, prefixes)
            if curie:
                p = curie.split(":", 1)[0]
                used[p] = prefixes[p]
    out = _prefix_lines(used)
    if out:
        out.append("")
    out.extend(_write_triples(triples, used, ""))
    return ("\n".join(out) + "\n").encode("utf-8") if out else b""


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*(?:(?:\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})[^<>"{}|^`\\\x00-\x20]*)*>)
  | (?P<prefixdir>@prefix\b|PREFIX\b|prefix\b)
  | (?P<bnode>_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dt>\^\^)
  | (?P<number>[+-]?(?:\d*\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+))
  | (?P<pname>(?:[A-Za-z](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?:(?:(?:[A-Za-z0-9_:]|%[0-9A-Fa-f]{2})(?:(?:[A-Za-z0-9_.\-:]|%[0-9A-Fa-f]{2})*(?:[A-Za-z0-9_\-:]|%[0-9A-Fa-f]{2}))?)?)
  | (?P<keyword>a\b|true\b|false\b|GRAPH\b)
  | (?P<punct>[.;,{}])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RdfSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append((kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return tokens


class _TurtleParser:
    def __init__(self, text: str, default_graph: Iri) -> None:
        self.tokens = _tokenize(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.default_graph = default_graph
        self.store = GraphStore()

    def peek(self, offset: int = 0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def error(self, message: str, tok=None) -> RdfSyntaxError:
        tok = tok or self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else ("", "", 1, 0)
            return RdfSyntaxError(f"{message} (at end of input)", last[2], last[3] + len(last[1]))
        return RdfSyntaxError(message, tok[2], tok[3])

    def next(self):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1]!r}", tok)
        return tok

    def parse(self) -> GraphStore:
        while self.peek() is not None:
            tok = self.peek()
            if tok[0] == "prefixdir":
                self.directive()
            elif tok[1] == "GRAPH":
                self.next()
                self.graph_block(self.term(self.next()))
            elif tok[0] in ("iri", "pname") and self.peek(1) is not None and self.peek(1)[1] == "{":
                self.graph_block(self.term(self.next()))
            else:
                self.triples(self.default_graph)
                self.expect(".")
        self.store.prefixes = dict(self.prefixes)
        return self.store

    def directive(self) -> None:
        kw = self.next()
        name = self.next()
        if name[0] != "pname" or not name[1].endswith(":"):
            raise self.error("prefix name expected", name)
        iri = self.next()
        if iri[0] != "iri":
            raise self.error("namespace IRI expected", iri)
        self.prefixes[name[1][:-1]] = unescape_iri(iri[1][1:-1])
        if kw[1] == "@prefix":
            self.expect(".")

    def graph_block(self, graph: Term) -> None:
        if not isinstance(graph, Iri):
            raise self.error("graph name must be an IRI")
        self.expect("{")
        while self.peek() is not None and self.peek()[1] != "}":
            self.triples(graph)
            if self.peek() is not None and self.peek()[1] == ".":
                self.next()
            elif self.peek() is None or self.peek()[1] != "}":
                raise self.error("expected '.' or '}'")
        self.expect("}")
        if self.peek() is not None and self.peek()[1] == ".":
            self.next()

    def triples(self, graph: Iri) -> None:
        subject_tok = self.next()
        subject = self.term(subject_tok)
        while True:
            verb_tok = self.next()
            predicate = RDF_TYPE if verb_tok[1] == "a" else self.term(verb_tok)
            while True:
                obj_tok = self.next()
                obj = self.term(obj_tok)
                try:
                    self.store.insert(Quad(subject, predicate, obj, graph))
                except TermError as exc:
                    raise self.error(str(exc), subject_tok) from None
                if self.peek() is not None and self.peek()[1] == ",":
                    self.next()
                    continue
                break
            if self.peek() is not None and self.peek()[1] == ";":
                while self.peek() is not None and self.peek()[1] == ";":
                    self.next()
                if self.peek() is not None and self.peek()[1] in (".", "}"):
                    return
                continue
            return

    def expand(self, tok) -> str:
        prefix, _, local = tok[1].partition(":")
        if prefix not in self.prefixes:
            raise self.error(f"unknown prefix {prefix!r}", tok)
        return self.prefixes[prefix] + local

    def term(self, tok) -> Term:
        kind, value = tok[0], tok[1]
        try:
            if kind == "iri":
                return Iri(unescape_iri(value[1:-1]))
            if kind == "pname":
                return Iri(self.expand(tok))
            if kind == "bnode":
                return BlankNode(value[2:])
            if kind == "string":
                lexical = unescape_string(value[1:-1], tok[2], tok[3] + 1)
                nxt = self.peek()
                if nxt is not None and nxt[0] == "lang":
                    self.next()
                    return Literal(lexical, language=nxt[1][1:])
                if nxt is not None and nxt[0] == "dt":
                    self.next()
                    dt_tok = self.next()
                    if dt_tok[0] == "iri":
                        dt = unescape_iri(dt_tok[1][1:-1])
                    elif dt_tok[0] == "pname":
                        dt = self.expand(dt_tok)
                    else:
                        raise self.error("datatype IRI expected", dt_tok)
                    return Literal(lexical, dt)
                return Literal(lexical)
            if kind == "number":
                if re.fullmatch(r"[+-]?\d+", value):
                    return Literal(value, XSD + "integer")
                if "e" in value or "E" in value:
                    return Literal(value, XSD + "double")
                return Literal(value, XSD + "decimal")
            if value in ("true", "false"):
                return Literal(value, XSD + "boolean")
        except TermError as exc:
            raise self.error(str(exc), tok) from None
        raise self.error(f"unexpected token {value!r}", tok)


def parse_turtle(data: bytes | str, default_graph: Iri = DEFAULT_GRAPH) -> GraphStore:
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    return _TurtleParser(text, default_graph).parse()
