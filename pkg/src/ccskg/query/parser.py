"""Recursive-descent parser for the supported SPARQL subset.

Supported: PREFIX/BASE, SELECT [DISTINCT] (vars | *), INSERT { } WHERE { },
triple patterns with ``a``, ``;`` and ``,``, property paths built from
``/``, ``^``, ``*``, ``+`` and parentheses, literals (typed, language-tagged,
numeric, boolean), FILTER with one comparison, ORDER BY [ASC|DESC] and LIMIT.
"""
from __future__ import annotations

import re

from ..rdf.nquads import RdfSyntaxError, unescape_iri, unescape_string
from ..rdf.terms import RDF_TYPE, XSD, Iri, Literal, TermError
from .ast import Filter, Inverse, OneOrMore, OrderKey, Query, Sequence, TriplePattern, Var, ZeroOrMore


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<op><=|>=|!=|&&|\|\||[<>=!])
  | (?P<var>[?$][A-Za-z0-9_]+)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dt>\^\^)
  | (?P<number>[+-]?(?:(?:\d+\.?\d*|\.\d+)[eE][+-]?\d+|\d*\.\d+|\d+))
  | (?P<pname>(?:[A-Za-z](?:[\w.\-]*[\w\-])?)?:(?:[\w\-:%.])*)
  | (?P<bnode>_:[A-Za-z0-9_]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}().;,*/^+|?])
    """,
    re.VERBOSE,
)


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind: str, value: str, line: int, col: int) -> None:
        self.kind, self.value, self.line, self.col = kind, value, line, col

    def is_kw(self, word: str) -> bool:
        return self.kind == "name" and self.value.upper() == word

    def __repr__(self) -> str:
        return f"{self.value!r}"


def tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind, value = m.lastgroup, m.group()
        end = m.end()
        if kind == "pname":
            # a prefixed name cannot end with '.', which terminates the triple instead
            trimmed = value.rstrip(".")
            end -= len(value) - len(trimmed)
            value = trimmed
        if kind not in ("ws", "comment"):
            tokens.append(_Tok(kind, value, line, pos - line_start + 1))
        chunk = text[pos:end]
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rfind("\n") + 1
        pos = end
    return tokens


class _Parser:
    def __init__(self, text: str, prefixes: dict[str, str] | None) -> None:
        self.tokens = tokenize(text)
        self.i = 0
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.base: str | None = None

    # token helpers
    def peek(self, offset: int = 0) -> _Tok | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def error(self, message: str, tok: _Tok | None = None) -> QuerySyntaxError:
        tok = tok if tok is not None else self.peek()
        if tok is None:
            if self.tokens:
                last = self.tokens[-1]
                return QuerySyntaxError(f"{message} (at end of query)", last.line, last.col + len(last.value))
            return QuerySyntaxError(f"{message} (empty query)", 1, 1)
        return QuerySyntaxError(message, tok.line, tok.col)

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of query")
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in ("punct", "op") and tok.value == value

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_kw(word)

    def expect(self, value: str) -> _Tok:
        tok = self.next()
        if tok.value != value or tok.kind not in ("punct", "op"):
            raise self.error(f"expected {value!r}, found {tok.value!r}", tok)
        return tok

    def expect_kw(self, word: str) -> _Tok:
        tok = self.next()
        if not tok.is_kw(word):
            raise self.error(f"expected {word}, found {tok.value!r}", tok)
        return tok

    # grammar
    def prologue(self) -> None:
        while True:
            if self.at_kw("PREFIX"):
                self.next()
                name = self.next()
                if name.kind != "pname" or not name.value.endswith(":") or name.value.count(":") != 1:
                    raise self.error("prefix name expected", name)
                iri = self.next()
                if iri.kind != "iri":
                    raise self.error("namespace IRI expected", iri)
                self.prefixes[name.value[:-1]] = self.resolve(unescape_iri(iri.value[1:-1]), iri)
            elif self.at_kw("BASE"):
                self.next()
                iri = self.next()
                if iri.kind != "iri":
                    raise self.error("base IRI expected", iri)
                self.base = unescape_iri(iri.value[1:-1])
            else:
                return

    def resolve(self, value: str, tok: _Tok) -> str:
        if re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*:", value):
            return value
        if self.base is None:
            raise self.error(f"relative IRI <{value}> without BASE", tok)
        return self.base + value

    def make_iri(self, value: str, tok: _Tok) -> Iri:
        try:
            return Iri(value)
        except TermError as exc:
            raise self.error(str(exc), tok) from None

    def iri_from(self, tok: _Tok) -> Iri:
        if tok.kind == "iri":
            return self.make_iri(self.resolve(unescape_iri(tok.value[1:-1]), tok), tok)
        prefix, _, local = tok.value.partition(":")
        if prefix not in self.prefixes:
            raise self.error(f"unknown prefix {prefix!r}", tok)
        local = re.sub(r"\\(.)", r"\1", local)
        return self.make_iri(self.prefixes[prefix] + local, tok)

    def query(self) -> Query:
        self.prologue()
        if self.at_kw("SELECT"):
            q = self.select()
        elif self.at_kw("INSERT"):
            q = self.insert()
        else:
            raise self.error("expected SELECT or INSERT")
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek().value!r} after end of query")
        return q

    def update(self) -> list[Query]:
        ops = []
        while True:
            self.prologue()
            ops.append(self.insert())
            if self.at(";"):
                self.next()
                if self.peek() is None:
                    break
                continue
            break
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek().value!r} after end of update")
        return ops

    def select(self) -> Query:
        self.expect_kw("SELECT")
        q = Query("SELECT")
        if self.at_kw("DISTINCT"):
            self.next()
            q.distinct = True
        elif self.at_kw("REDUCED"):
            self.next()
        if self.at("*"):
            self.next()
            q.projection = None
        else:
            projection = []
            while self.peek() is not None and self.peek().kind == "var":
                projection.append(Var(self.next().value[1:]))
            if not projection:
                raise self.error("expected projection variables or '*'")
            q.projection = projection
        if self.at_kw("WHERE"):
            self.next()
        self.group(q)
        self.modifiers(q)
        q.prefixes = dict(self.prefixes)
        if q.projection is not None:
            bound = set(q.where_variables())
            for v in q.projection:
                if v.name not in bound:
                    q.warnings.append(f"unbounded projection: ?{v.name} does not occur in WHERE")
        return q

    def insert(self) -> Query:
        self.expect_kw("INSERT")
        q = Query("INSERT")
        self.expect("{")
        while not self.at("}"):
            self.triples_same_subject(q.template, template=True)
            if self.at("."):
                self.next()
            elif not self.at("}"):
                raise self.error("expected '.' or '}' in INSERT template")
        self.expect("}")
        self.expect_kw("WHERE")
        self.group(q)
        q.prefixes = dict(self.prefixes)
        bound = set(q.where_variables())
        for tp in q.template:
            for name in tp.variables():
                if name not in bound:
                    q.warnings.append(f"template variable ?{name} does not occur in WHERE")
        return q

    def group(self, q: Query) -> None:
        self.expect("{")
        while not self.at("}"):
            tok = self.peek()
            if tok is None:
                raise self.error("unterminated group pattern")
            if tok.is_kw("FILTER"):
                self.next()
                q.filters.append(self.filter())
            elif tok.kind == "name" and tok.value.upper() in ("OPTIONAL", "UNION", "GRAPH", "MINUS"):
                raise self.error(f"{tok.value.upper()} is not supported", tok)
            elif self.at("{"):
                raise self.error("nested group patterns are not supported", tok)
            else:
                self.triples_same_subject(q.where)
            if self.at("."):
                self.next()
            elif not self.at("}") and not self.at_kw("FILTER"):
                raise self.error(f"expected '.' or '}}', found {self.peek().value!r}" if self.peek() else "expected '}'")
        self.expect("}")

    def filter(self) -> Filter:
        depth = 0
        while self.at("("):
            self.next()
            depth += 1
        if depth == 0:
            raise self.error("expected '(' after FILTER")
        left = self.operand()
        tok = self.next()
        if tok.kind != "op" or tok.value not in ("<", "<=", "=", "!=", ">=", ">"):
            raise self.error(f"expected comparison operator, found {tok.value!r}", tok)
        right = self.operand()
        for _ in range(depth):
            self.expect(")")
        return Filter(tok.value, left, right)

    def operand(self):
        tok = self.peek()
        if tok is None:
            raise self.error("expected an operand")
        if tok.kind == "var":
            self.next()
            return Var(tok.value[1:])
        return self.term(allow_literal=True)

    def modifiers(self, q: Query) -> None:
        if self.at_kw("ORDER"):
            self.next()
            self.expect_kw("BY")
            while True:
                tok = self.peek()
                if tok is None:
                    break
                if tok.kind == "var":
                    self.next()
                    q.order.append(OrderKey(Var(tok.value[1:])))
                elif tok.is_kw("ASC") or tok.is_kw("DESC"):
                    self.next()
                    self.expect("(")
                    var = self.next()
                    if var.kind != "var":
                        raise self.error("expected a variable in ORDER BY", var)
                    self.expect(")")
                    q.order.append(OrderKey(Var(var.value[1:]), tok.is_kw("DESC")))
                else:
                    break
            if not q.order:
                raise self.error("ORDER BY needs at least one key")
        if self.at_kw("LIMIT"):
            self.next()
            tok = self.next()
            if tok.kind != "number" or not tok.value.isdigit():
                raise self.error("LIMIT expects a non-negative integer", tok)
            q.limit = int(tok.value)

    def triples_same_subject(self, out: list[TriplePattern], template: bool = False) -> None:
        subject = self.node(template)
        if isinstance(subject, Literal):
            raise self.error("a literal cannot be a subject", self.tokens[self.i - 1])
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "var":
                self.next()
                verb = Var(tok.value[1:])
            else:
                verb = self.simple_predicate() if template else self.path()
            while True:
                obj = self.node(template)
                out.append(TriplePattern(subject, verb, obj))
                if self.at(","):
                    self.next()
                    continue
                break
            if self.at(";"):
                while self.at(";"):
                    self.next()
                if self.at(".") or self.at("}") or self.peek() is None:
                    return
                continue
            return

    def simple_predicate(self) -> Iri:
        tok = self.next()
        if tok.kind == "name" and tok.value == "a":
            return RDF_TYPE
        if tok.kind in ("iri", "pname"):
            return self.iri_from(tok)
        raise self.error(f"expected a predicate, found {tok.value!r}", tok)

    def path(self):
        steps = [self.path_elt_or_inverse()]
        while self.at("/"):
            self.next()
            steps.append(self.path_elt_or_inverse())
        if self.at("|"):
            raise self.error("path alternatives '|' are not supported")
        return steps[0] if len(steps) == 1 else Sequence(tuple(steps))

    def path_elt_or_inverse(self):
        if self.at("^"):
            self.next()
            return Inverse(self.path_elt())
        return self.path_elt()

    def path_elt(self):
        tok = self.peek()
        if tok is None:
            raise self.error("expected a path")
        if self.at("("):
            self.next()
            primary = self.path()
            self.expect(")")
        elif tok.kind == "name" and tok.value == "a":
            self.next()
            primary = RDF_TYPE
        elif tok.kind in ("iri", "pname"):
            self.next()
            primary = self.iri_from(tok)
        else:
            raise self.error(f"expected a predicate or path, found {tok.value!r}", tok)
        if self.at("*"):
            self.next()
            return ZeroOrMore(primary)
        if self.at("+"):
            self.next()
            return OneOrMore(primary)
        if self.at("?"):
            raise self.error("zero-or-one paths '?' are not supported")
        return primary

    def node(self, template: bool = False):
        tok = self.peek()
        if tok is None:
            raise self.error("expected a term or variable")
        if tok.kind == "var":
            self.next()
            return Var(tok.value[1:])
        if tok.kind == "bnode":
            raise self.error("blank nodes in patterns are not supported", tok)
        return self.term(allow_literal=True)

    def term(self, allow_literal: bool = True):
        tok = self.next()
        if tok.kind in ("iri", "pname"):
            return self.iri_from(tok)
        if tok.kind == "string":
            lexical = self._string(tok)
            if self.peek() is not None and self.peek().kind == "lang":
                lang = self.next().value[1:]
                return self._literal(lexical, language=lang, tok=tok)
            if self.peek() is not None and self.peek().kind == "dt":
                self.next()
                dt_tok = self.next()
                if dt_tok.kind not in ("iri", "pname"):
                    raise self.error("datatype IRI expected after ^^", dt_tok)
                return self._literal(lexical, datatype=self.iri_from(dt_tok).value, tok=tok)
            return self._literal(lexical, tok=tok)
        if tok.kind == "number":
            v = tok.value
            if re.fullmatch(r"[+-]?\d+", v):
                return Literal(v, XSD + "integer")
            if "e" in v.lower():
                return Literal(v, XSD + "double")
            return Literal(v, XSD + "decimal")
        if tok.kind == "name" and tok.value in ("true", "false"):
            return Literal(tok.value, XSD + "boolean")
        raise self.error(f"expected a term, found {tok.value!r}", tok)

    def _string(self, tok: _Tok) -> str:
        try:
            return unescape_string(tok.value[1:-1], tok.line, tok.col)
        except RdfSyntaxError as exc:
            raise QuerySyntaxError(exc.reason, tok.line, tok.col) from None

    def _literal(self, lexical: str, datatype: str | None = None, language: str | None = None, tok=None) -> Literal:
        try:
            if language is not None:
                return Literal(lexical, language=language)
            if datatype is not None:
                return Literal(lexical, datatype)
            return Literal(lexical)
        except TermError as exc:
            raise self.error(str(exc), tok) from None


def parse_query(text: str, prefixes: dict[str, str] | None = None) -> Query:
    """Parse one SELECT or INSERT-WHERE query.

    ``prefixes`` are predeclared; PREFIX declarations in the text override them.
    """
    return _Parser(text, prefixes).query()


def parse_update(text: str, prefixes: dict[str, str] | None = None) -> list[Query]:
    """Parse one or more INSERT-WHERE operations separated by ';'."""
    return _Parser(text, prefixes).update()


def parse_term(text: str, prefixes: dict[str, str] | None = None):
    """Parse one RDF term written as in a query (IRI, prefixed name or literal)."""
    p = _Parser(text, prefixes)
    term = p.term(allow_literal=True)
    if p.peek() is not None:
        raise p.error(f"unexpected {p.peek().value!r} after term")
    return term
