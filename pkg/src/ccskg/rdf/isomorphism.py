"""Brute-force blank-node isomorphism check for small stores."""
from __future__ import annotations

from collections import Counter

from .store import GraphStore
from .terms import BlankNode, Quad

MAX_BLANK_NODES = 20


class IsomorphismLimitError(ValueError):
    pass


def _signature(store: GraphStore, node: BlankNode) -> tuple:
    # ground neighbourhood only: ignores the identity of other blank nodes
    out = Counter()
    for q in store.match(subject=node):
        o = "_" if isinstance(q.object, BlankNode) else q.object.nt
        out[("out", q.predicate.nt, o, q.graph.nt)] += 1
    for q in store.match(obj=node):
        s = "_" if isinstance(q.subject, BlankNode) else q.subject.nt
        out[("in", q.predicate.nt, s, q.graph.nt)] += 1
    return tuple(sorted(out.items()))


def _rename(quad: Quad, mapping: dict[BlankNode, BlankNode]) -> Quad:
    s = mapping.get(quad.subject, quad.subject) if isinstance(quad.subject, BlankNode) else quad.subject
    o = mapping.get(quad.object, quad.object) if isinstance(quad.object, BlankNode) else quad.object
    return Quad(s, quad.predicate, o, quad.graph)


def isomorphic(a: GraphStore, b: GraphStore, limit: int = MAX_BLANK_NODES) -> bool:
    """True iff some blank-node bijection makes the quad sets of ``a`` and ``b`` equal."""
    if len(a) != len(b):
        return False
    a_blank = sorted(a.blank_nodes(), key=lambda n: n.label)
    b_blank = sorted(b.blank_nodes(), key=lambda n: n.label)
    if len(a_blank) > limit or len(b_blank) > limit:
        raise IsomorphismLimitError(
            f"undecidable at this size: {max(len(a_blank), len(b_blank))} blank nodes exceeds limit {limit}"
        )
    if len(a_blank) != len(b_blank):
        return False

    def ground(store: GraphStore) -> set[Quad]:
        return {q for q in store.quads if not isinstance(q.subject, BlankNode) and not isinstance(q.object, BlankNode)}

    if ground(a) != ground(b):
        return False
    if not a_blank:
        return True

    a_sig = {n: _signature(a, n) for n in a_blank}
    b_sig = {n: _signature(b, n) for n in b_blank}
    if Counter(a_sig.values()) != Counter(b_sig.values()):
        return False

    a_blank_quads = [q for q in a.quads if q not in ground(a)]
    b_quads = b.quads
    mapping: dict[BlankNode, BlankNode] = {}
    used: set[BlankNode] = set()

    def consistent() -> bool:
        for q in a_blank_quads:
            nodes = [t for t in (q.subject, q.object) if isinstance(t, BlankNode)]
            if all(n in mapping for n in nodes) and _rename(q, mapping) not in b_quads:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(a_blank):
            return True
        node = a_blank[i]
        for cand in b_blank:
            if cand in used or b_sig[cand] != a_sig[node]:
                continue
            mapping[node] = cand
            used.add(cand)
            if consistent() and search(i + 1):
                return True
            del mapping[node]
            used.discard(cand)
        return False

    return search(0)
