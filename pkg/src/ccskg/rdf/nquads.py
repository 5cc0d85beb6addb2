"""Canonical N-Quads serialization and a strict line parser."""
from __future__ import annotations

import re

from .store import GraphStore
from .terms import BlankNode, Iri, Literal, Quad, TermError, XSD_STRING

DEFAULT_GRAPH = Iri("urn:x-ccskg:default-graph")


class RdfSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


def serialize_nquads(store: GraphStore) -> bytes:
    """Quads sorted by (graph, subject, predicate, object) N-Triples forms."""
    lines = sorted(store.quads, key=Quad.sort_key)
    return "".join(q.to_nquads() + "\n" for q in lines).encode("utf-8")


_UCHAR = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape_iri(text: str) -> str:
    return _UCHAR.sub(lambda m: chr(int(m.group(1) or m.group(2), 16)), text)


def unescape_string(text: str, line: int = 0, column: int = 0) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise RdfSyntaxError("dangling backslash in string", line, column + i)
        nxt = text[i + 1]
        if nxt in _ECHAR:
            out.append(_ECHAR[nxt])
            i += 2
        elif nxt in "uU":
            width = 4 if nxt == "u" else 8
            digits = text[i + 2 : i + 2 + width]
            if len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                raise RdfSyntaxError("bad unicode escape", line, column + i)
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise RdfSyntaxError(f"unknown escape \\{nxt}", line, column + i)
    return "".join(out)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*(?:\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}|[^<>"{}|^`\\\x00-\x20])*>)
  | (?P<bnode>_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dt>\^\^)
  | (?P<dot>\.)
  | (?P<comment>\#.*)
    """,
    re.VERBOSE,
)


def _tokenize_line(text: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise RdfSyntaxError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append((kind, m.group(), pos + 1))
        pos = m.end()
    return tokens


def parse_nquads(data: bytes | str, default_graph: Iri = DEFAULT_GRAPH) -> GraphStore:
    """Parse N-Quads (or N-Triples, whose triples land in ``default_graph``)."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    store = GraphStore()
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(line, lineno)
        if not tokens:
            continue
        terms = []
        i = 0
        while i < len(tokens) and tokens[i][0] != "dot":
            kind, value, col = tokens[i]
            try:
                if kind == "iri":
                    terms.append((Iri(unescape_iri(value[1:-1])), col))
                elif kind == "bnode":
                    terms.append((BlankNode(value[2:]), col))
                elif kind == "string":
                    lexical = unescape_string(value[1:-1], lineno, col + 1)
                    if i + 1 < len(tokens) and tokens[i + 1][0] == "lang":
                        terms.append((Literal(lexical, language=tokens[i + 1][1][1:]), col))
                        i += 1
                    elif i + 1 < len(tokens) and tokens[i + 1][0] == "dt":
                        if i + 2 >= len(tokens) or tokens[i + 2][0] != "iri":
                            raise RdfSyntaxError("datatype IRI expected after ^^", lineno, tokens[i + 1][2])
                        dt = unescape_iri(tokens[i + 2][1][1:-1])
                        terms.append((Literal(lexical, dt), col))
                        i += 2
                    else:
                        terms.append((Literal(lexical, XSD_STRING), col))
                else:
                    raise RdfSyntaxError(f"unexpected token {value!r}", lineno, col)
            except TermError as exc:
                raise RdfSyntaxError(str(exc), lineno, col) from None
            i += 1
        if i >= len(tokens):
            raise RdfSyntaxError("statement not terminated by '.'", lineno, len(line) + 1)
        if i != len(tokens) - 1:
            raise RdfSyntaxError("trailing content after '.'", lineno, tokens[i + 1][2])
        if len(terms) not in (3, 4):
            raise RdfSyntaxError(f"expected 3 or 4 terms, found {len(terms)}", lineno, 1)
        graph = terms[3][0] if len(terms) == 4 else default_graph
        try:
            store.insert(Quad(terms[0][0], terms[1][0], terms[2][0], graph))
        except TermError as exc:
            raise RdfSyntaxError(str(exc), lineno, 1) from None
    return store


def serialize_ntriples(triples) -> bytes:
    lines = sorted(f"{s.nt} {p.nt} {o.nt} ." for s, p, o in triples)
    return "".join(line + "\n" for line in lines).encode("utf-8")
