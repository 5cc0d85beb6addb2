"""Indexed quad store with named graphs.

The default graph used for matching is the union of all named graphs: a
``match`` call without a graph argument sees every quad.
"""
from __future__ import annotations

import threading
from collections import defaultdict
from collections.abc import Iterable, Iterator
from contextlib import contextmanager

from .terms import BlankNode, Iri, Quad, Term, TermError


class ReadWriteLock:
    """Many concurrent readers or a single writer."""

    def __init__(self) -> None:
        self._cond = threading.Condition(threading.Lock())
        self._readers = 0
        self._writer = False

    @contextmanager
    def reading(self) -> Iterator[None]:
        with self._cond:
            while self._writer:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if not self._readers:
                    self._cond.notify_all()

    @contextmanager
    def writing(self) -> Iterator[None]:
        with self._cond:
            while self._writer or self._readers:
                self._cond.wait()
            self._writer = True
        try:
            yield
        finally:
            with self._cond:
                self._writer = False
                self._cond.notify_all()


class GraphStore:
    def __init__(self, quads: Iterable[Quad] = (), prefixes: dict[str, str] | None = None) -> None:
        self._quads: set[Quad] = set()
        self._by_graph: dict[Iri, set[Quad]] = defaultdict(set)
        self._by_subject: dict[Term, set[Quad]] = defaultdict(set)
        self._by_object: dict[Term, set[Quad]] = defaultdict(set)
        self._by_sp: dict[tuple[Term, Term], set[Quad]] = defaultdict(set)
        self._by_po: dict[tuple[Term, Term], set[Quad]] = defaultdict(set)
        self._by_predicate: dict[Term, set[Quad]] = defaultdict(set)
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.lock = ReadWriteLock()
        for quad in quads:
            self.insert(quad)

    def __len__(self) -> int:
        return len(self._quads)

    def __contains__(self, quad: object) -> bool:
        return quad in self._quads

    def __iter__(self) -> Iterator[Quad]:
        return iter(sorted(self._quads, key=Quad.sort_key))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphStore):
            return NotImplemented
        return self._quads == other._quads

    @property
    def quads(self) -> frozenset[Quad]:
        return frozenset(self._quads)

    def insert(self, quad: Quad) -> int:
        """Add ``quad``; return the store size afterwards. Duplicates are a no-op."""
        if not isinstance(quad, Quad):
            raise TermError(f"expected a Quad, got {type(quad).__name__}")
        if quad in self._quads:
            return len(self._quads)
        self._quads.add(quad)
        self._by_graph[quad.graph].add(quad)
        self._by_subject[quad.subject].add(quad)
        self._by_object[quad.object].add(quad)
        self._by_predicate[quad.predicate].add(quad)
        self._by_sp[(quad.subject, quad.predicate)].add(quad)
        self._by_po[(quad.predicate, quad.object)].add(quad)
        return len(self._quads)

    def add(self, subject: Term, predicate: Term, obj: Term, graph: Term) -> int:
        return self.insert(Quad(subject, predicate, obj, graph))  # type: ignore[arg-type]

    def update(self, quads: Iterable[Quad]) -> int:
        """Insert many quads; return how many were new."""
        before = len(self._quads)
        for quad in quads:
            self.insert(quad)
        return len(self._quads) - before

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        obj: Term | None = None,
        graph: Term | None = None,
    ) -> list[Quad]:
        """All quads agreeing on every concrete position (``None`` is a wildcard)."""
        if subject is not None and predicate is not None:
            candidates = self._by_sp.get((subject, predicate), ())
        elif predicate is not None and obj is not None:
            candidates = self._by_po.get((predicate, obj), ())
        elif subject is not None:
            candidates = self._by_subject.get(subject, ())
        elif obj is not None:
            candidates = self._by_object.get(obj, ())
        elif graph is not None:
            candidates = self._by_graph.get(graph, ())
        elif predicate is not None:
            candidates = self._by_predicate.get(predicate, ())
        else:
            candidates = self._quads
        return [
            q
            for q in candidates
            if (subject is None or q.subject == subject)
            and (predicate is None or q.predicate == predicate)
            and (obj is None or q.object == obj)
            and (graph is None or q.graph == graph)
        ]

    def triples(self, subject=None, predicate=None, obj=None) -> set[tuple[Term, Term, Term]]:
        """Distinct triples of the union default graph matching the pattern."""
        return {q.triple for q in self.match(subject, predicate, obj)}

    def graphs(self) -> list[Iri]:
        return sorted((g for g, qs in self._by_graph.items() if qs), key=lambda g: g.value)

    def stats(self) -> dict[Iri, int]:
        return {g: len(self._by_graph[g]) for g in self.graphs()}

    def terms(self) -> set[Term]:
        """Every term occurring in subject, predicate or object position."""
        out: set[Term] = set()
        for q in self._quads:
            out.add(q.subject)
            out.add(q.predicate)
            out.add(q.object)
        return out

    def nodes(self) -> set[Term]:
        return {t for t in self._by_subject if self._by_subject[t]} | {
            t for t in self._by_object if self._by_object[t]
        }

    def blank_nodes(self) -> set[BlankNode]:
        out = set()
        for q in self._quads:
            for t in (q.subject, q.object):
                if isinstance(t, BlankNode):
                    out.add(t)
        return out

    def copy(self) -> "GraphStore":
        return GraphStore(self._quads, self.prefixes)

    def snapshot(self) -> "GraphStore":
        """A copy taken under the read lock, safe to hand to other threads."""
        with self.lock.reading():
            return self.copy()

