"""Evaluation of parsed queries over a GraphStore.

Basic graph patterns are joined left to right with binding propagation (no
reordering). Triple matches range over the union default graph and are
visited in N-Triples order so results are deterministic.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterator

from ..ingest.records import WarningLog
from ..rdf.store import GraphStore
from ..rdf.terms import Iri, Quad, Term, TermError
from .ast import Filter, Inverse, OneOrMore, Query, Sequence, TriplePattern, Var, ZeroOrMore
from .values import EvaluationError, compare, order_key

Binding = dict[str, Term]


class QueryEvaluationError(ValueError):
    pass


def _nt_sorted(pairs) -> list:
    return sorted(pairs, key=lambda pair: tuple(t.nt for t in pair))


class _PathEvaluator:
    """Evaluates property paths; closures are memoized for one query run."""

    def __init__(self, store: GraphStore, constants=()) -> None:
        self.store = store
        self.constants = set(constants)
        self._forward: dict[tuple, list[Term]] = {}
        self._backward: dict[tuple, list[Term]] = {}
        self._all_terms: list[Term] | None = None

    def all_terms(self) -> list[Term]:
        if self._all_terms is None:
            # the active domain: store terms plus the query's own constants
            self._all_terms = sorted(self.store.terms() | self.constants, key=lambda t: t.nt)
        return self._all_terms

    def pairs(self, path, s: Term | None, o: Term | None) -> list[tuple[Term, Term]]:
        """Bag of (start, end) pairs connected by ``path``."""
        if isinstance(path, Iri):
            return _nt_sorted((a, c) for a, _, c in self.store.triples(s, path, o))
        if isinstance(path, Inverse):
            return [(a, b) for b, a in self.pairs(path.path, o, s)]
        if isinstance(path, Sequence):
            return self._sequence(list(path.steps), s, o)
        if isinstance(path, (ZeroOrMore, OneOrMore)):
            return self._closure(path, s, o)
        raise QueryEvaluationError(f"unsupported path {path!r}")

    def _sequence(self, steps: list, s: Term | None, o: Term | None) -> list[tuple[Term, Term]]:
        if len(steps) == 1:
            return self.pairs(steps[0], s, o)
        out = []
        for a, b in self.pairs(steps[0], s, None):
            out.extend((a, c) for _, c in self._sequence(steps[1:], b, o))
        return out

    def _reach(self, inner, start: Term, forward: bool, reflexive: bool) -> list[Term]:
        cache = self._forward if forward else self._backward
        key = (inner, start, reflexive)
        if key in cache:
            return cache[key]

        def step(node: Term) -> list[Term]:
            if forward:
                return [b for _, b in self.pairs(inner, node, None)]
            return [a for a, _ in self.pairs(inner, None, node)]

        seen: set[Term] = {start} if reflexive else set()
        order: list[Term] = [start] if reflexive else []
        queue = deque([start])
        visited = {start}
        while queue:
            node = queue.popleft()
            for nxt in step(node):
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                if nxt not in visited:
                    visited.add(nxt)
                    queue.append(nxt)
        result = sorted(order, key=lambda t: t.nt)
        cache[key] = result
        return result

    def _closure(self, path, s: Term | None, o: Term | None) -> list[tuple[Term, Term]]:
        # closures have set semantics: each connected pair appears once
        reflexive = isinstance(path, ZeroOrMore)
        inner = path.path
        if s is not None:
            return [(s, x) for x in self._reach(inner, s, True, reflexive) if o is None or x == o]
        if o is not None:
            return [(x, o) for x in self._reach(inner, o, False, reflexive)]
        out = []
        for node in self.all_terms():
            out.extend((node, x) for x in self._reach(inner, node, True, reflexive))
        return out


def _resolve(node, binding: Binding) -> Term | None:
    if isinstance(node, Var):
        return binding.get(node.name)
    return node


def _extend(binding: Binding, node, value: Term) -> Binding | None:
    """Bind ``node`` to ``value`` if compatible; returns the new binding or None."""
    if not isinstance(node, Var):
        return binding if node == value else None
    current = binding.get(node.name)
    if current is None:
        new = dict(binding)
        new[node.name] = value
        return new
    return binding if current == value else None


def _match_pattern(paths: _PathEvaluator, tp: TriplePattern, binding: Binding) -> Iterator[Binding]:
    s = _resolve(tp.subject, binding)
    o = _resolve(tp.object, binding)
    if isinstance(tp.path, Var):
        p = binding.get(tp.path.name)
        rows = sorted(paths.store.triples(s, p, o), key=lambda t: (t[0].nt, t[1].nt, t[2].nt))
        for ts, tpred, to in rows:
            b = _extend(binding, tp.subject, ts)
            if b is not None:
                b = _extend(b, tp.path, tpred)
            if b is not None:
                b = _extend(b, tp.object, to)
            if b is not None:
                yield b
        return
    for ts, to in paths.pairs(tp.path, s, o):
        b = _extend(binding, tp.subject, ts)
        if b is not None:
            b = _extend(b, tp.object, to)
        if b is not None:
            yield b


def _solutions(store: GraphStore, patterns: list[TriplePattern], constants=()) -> list[Binding]:
    paths = _PathEvaluator(store, constants)
    current: list[Binding] = [{}]
    for tp in patterns:
        nxt: list[Binding] = []
        for binding in current:
            nxt.extend(_match_pattern(paths, tp, binding))
        current = nxt
        if not current:
            break
    return current


def _passes(f: Filter, binding: Binding) -> bool:
    left = _resolve(f.left, binding)
    right = _resolve(f.right, binding)
    if left is None or right is None:
        return False
    try:
        return compare(f.op, left, right)
    except EvaluationError:
        return False


def where_solutions(store: GraphStore, query: Query) -> list[Binding]:
    """WHERE-clause solutions (bag) after filters, before modifiers."""
    with store.lock.reading():
        rows = _solutions(store, query.where, query.constants())
    return [b for b in rows if all(_passes(f, b) for f in query.filters)]


class Result:
    """Ordered solution sequence with its projected variable list."""

    def __init__(self, variables: list[str], rows: list[dict[str, Term]], warnings: list[str] | None = None) -> None:
        self.variables = variables
        self.rows = rows
        self.warnings = warnings or []

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def tuples(self) -> list[tuple[Term | None, ...]]:
        return [tuple(row.get(v) for v in self.variables) for row in self.rows]


def evaluate(store: GraphStore, query: Query) -> Result:
    if query.form != "SELECT":
        raise QueryEvaluationError("evaluate expects a SELECT query; use evaluate_insert for updates")
    rows = where_solutions(store, query)
    # stable multi-pass sort, least significant key first
    for key in reversed(query.order):
        rows.sort(key=lambda b, name=key.var.name: order_key(b.get(name)), reverse=key.descending)
    variables = query.result_variables()
    projected = [{v: b[v] for v in variables if v in b} for b in rows]
    if query.distinct:
        seen: set[tuple] = set()
        unique = []
        for row in projected:
            key = tuple(row.get(v) for v in variables)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        projected = unique
    if query.limit is not None:
        projected = projected[: query.limit]
    return Result(variables, projected, list(query.warnings))


def instantiate(query: Query, graph: Iri, binding: Binding, warn: Callable[[str], None]) -> list[Quad]:
    quads = []
    for tp in query.template:
        terms = [_resolve(n, binding) for n in (tp.subject, tp.path, tp.object)]
        if any(t is None for t in terms):
            missing = [n.name for n in (tp.subject, tp.path, tp.object) if isinstance(n, Var) and n.name not in binding]
            warn(f"solution skipped: template variable ?{missing[0]} unbound")
            return []
        try:
            quads.append(Quad(terms[0], terms[1], terms[2], graph))
        except TermError as exc:
            warn(f"solution skipped: {exc}")
            return []
    return quads


def evaluate_insert(store: GraphStore, query: Query, graph: Iri, log: WarningLog | None = None,
                    source: str = "update") -> int:
    """Run an INSERT-WHERE; returns the number of quads that were new."""
    if query.form != "INSERT":
        raise QueryEvaluationError("evaluate_insert expects an INSERT query")
    log = WarningLog() if log is None else log
    rows = where_solutions(store, query)
    pending: list[Quad] = []
    for binding in rows:
        pending.extend(instantiate(query, graph, binding, lambda msg: log.warn(source, str(graph), msg, dropped=True)))
    with store.lock.writing():
        return store.update(pending)


__all__ = ["Binding", "QueryEvaluationError", "Result", "evaluate", "evaluate_insert", "where_solutions"]
