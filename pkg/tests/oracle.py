"""Independent reference implementations used only by the tests.

The query oracle enumerates every assignment of query variables to the active
domain (store terms plus query constants) and keeps those under which every
pattern holds. Paths are decided by a closure computed with Warshall's
algorithm, sharing no code with the engine's BFS.
"""
from __future__ import annotations

from collections import Counter

from ccskg.query.ast import Inverse, OneOrMore, Query, Sequence, Var, ZeroOrMore
from ccskg.query.values import EvaluationError, compare
from ccskg.rdf.terms import Iri


class Oracle:
    def __init__(self, store, query: Query) -> None:
        self.triples = {q.triple for q in store}
        self.query = query
        domain = {t for tr in self.triples for t in tr}
        for tp in query.where:
            for node in (tp.subject, tp.object):
                if not isinstance(node, Var):
                    domain.add(node)
            domain |= _path_iris(tp.path)
        self.domain = sorted(domain, key=lambda t: t.nt)
        self._closures: dict = {}

    def count(self, s, path, o) -> int:
        """Number of distinct ways ``path`` connects s to o (bag multiplicity)."""
        if isinstance(path, Iri):
            return int((s, path, o) in self.triples)
        if isinstance(path, Inverse):
            return self.count(o, path.path, s)
        if isinstance(path, Sequence):
            if len(path.steps) == 1:
                return self.count(s, path.steps[0], o)
            rest = Sequence(path.steps[1:])
            return sum(self.count(s, path.steps[0], m) * self.count(m, rest, o) for m in self.domain)
        if isinstance(path, (ZeroOrMore, OneOrMore)):
            if isinstance(path, ZeroOrMore) and s == o:
                return 1
            return int((s, o) in self.closure(path.path))
        raise TypeError(path)

    def closure(self, inner) -> set:
        """Transitive (non-reflexive) closure of ``inner`` over the domain."""
        if inner not in self._closures:
            nodes = self.domain
            reach = {a: {b for b in nodes if self.count(a, inner, b)} for a in nodes}
            for k in nodes:
                for i in nodes:
                    if k in reach[i]:
                        reach[i] |= reach[k]
            self._closures[inner] = {(a, b) for a in nodes for b in reach[a]}
        return self._closures[inner]

    def _pattern_count(self, tp, b) -> int:
        s = b[tp.subject.name] if isinstance(tp.subject, Var) else tp.subject
        o = b[tp.object.name] if isinstance(tp.object, Var) else tp.object
        if isinstance(tp.path, Var):
            return int((s, b[tp.path.name], o) in self.triples)
        return self.count(s, tp.path, o)

    def solutions(self) -> Counter:
        """Multiset of full assignments (as sorted item tuples).

        Every variable ranges over the whole domain; a pattern is checked as
        soon as all of its variables are assigned.
        """
        names = list(self.query.where_variables())
        ready: list[list] = [[] for _ in names]
        for tp in self.query.where:
            vs = tp.variables()
            level = max((names.index(v) for v in vs), default=-1)
            if level < 0:
                ready.append(tp)  # ground pattern, checked once below
            else:
                ready[level].append(tp)
        ground = 1
        for tp in ready[len(names):]:
            ground *= self._pattern_count(tp, {})
        out: Counter = Counter()
        if not ground:
            return out

        def extend(level: int, b: dict, mult: int) -> None:
            if level == len(names):
                if all(self._filter(f, b) for f in self.query.filters):
                    out[tuple(sorted(b.items(), key=lambda kv: kv[0]))] += mult
                return
            for value in self.domain:
                b[names[level]] = value
                m = mult
                for tp in ready[level]:
                    m *= self._pattern_count(tp, b)
                    if not m:
                        break
                if m:
                    extend(level + 1, b, m)
            del b[names[level]]

        extend(0, {}, ground)
        return out

    @staticmethod
    def _filter(f, b) -> bool:
        left = b.get(f.left.name) if isinstance(f.left, Var) else f.left
        right = b.get(f.right.name) if isinstance(f.right, Var) else f.right
        try:
            return left is not None and right is not None and compare(f.op, left, right)
        except EvaluationError:
            return False


def _path_iris(path) -> set:
    if isinstance(path, Iri):
        return {path}
    if isinstance(path, (Inverse, ZeroOrMore, OneOrMore)):
        return _path_iris(path.path)
    if isinstance(path, Sequence):
        out = set()
        for step in path.steps:
            out |= _path_iris(step)
        return out
    return set()


def oracle_solutions(store, query: Query) -> Counter:
    return Oracle(store, query).solutions()


def bfs_closure(edges: set[tuple], start, reflexive: bool = True) -> set:
    """Plain BFS over an explicit edge list."""
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
    seen = {start} if reflexive else set()
    frontier = [start]
    visited = {start}
    while frontier:
        nxt = []
        for node in frontier:
            for m in adj.get(node, ()):
                seen.add(m)
                if m not in visited:
                    visited.add(m)
                    nxt.append(m)
        frontier = nxt
    return seen


def subclass_closure(pairs: set[tuple[str, str]], typed: set[tuple[str, str]]) -> set[tuple[str, str]]:
    """Reflexive-transitive superclass closure of (instance, class) facts."""
    out = set(typed)
    changed = True
    while changed:
        changed = False
        for inst, cls in list(out):
            for sub, sup in pairs:
                if sub == cls and (inst, sup) not in out:
                    out.add((inst, sup))
                    changed = True
    return out
