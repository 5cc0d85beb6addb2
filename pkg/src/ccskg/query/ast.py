"""Query syntax tree."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..rdf.terms import Iri, Term


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class Inverse:
    path: "Path"


@dataclass(frozen=True)
class Sequence:
    steps: tuple["Path", ...]


@dataclass(frozen=True)
class ZeroOrMore:
    path: "Path"


@dataclass(frozen=True)
class OneOrMore:
    path: "Path"


Path = Union[Iri, Inverse, Sequence, ZeroOrMore, OneOrMore]
Node = Union[Var, Term]


@dataclass(frozen=True)
class TriplePattern:
    subject: Node
    path: Union[Var, Path]
    object: Node

    def variables(self) -> list[str]:
        out = [t.name for t in (self.subject, self.path, self.object) if isinstance(t, Var)]
        return list(dict.fromkeys(out))


@dataclass(frozen=True)
class Filter:
    op: str
    left: Node
    right: Node

    def variables(self) -> list[str]:
        return [t.name for t in (self.left, self.right) if isinstance(t, Var)]


@dataclass(frozen=True)
class OrderKey:
    var: Var
    descending: bool = False


@dataclass
class Query:
    form: str  # "SELECT" | "INSERT"
    where: list[TriplePattern] = field(default_factory=list)
    filters: list[Filter] = field(default_factory=list)
    projection: list[Var] | None = None  # None means SELECT *
    distinct: bool = False
    order: list[OrderKey] = field(default_factory=list)
    limit: int | None = None
    template: list[TriplePattern] = field(default_factory=list)
    prefixes: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def where_variables(self) -> list[str]:
        names: list[str] = []
        for tp in self.where:
            names.extend(tp.variables())
        return list(dict.fromkeys(names))

    def result_variables(self) -> list[str]:
        if self.projection is None:
            return self.where_variables()
        return [v.name for v in self.projection]

    def constants(self) -> set[Term]:
        """Non-variable terms of the WHERE clause, path IRIs included."""
        out: set[Term] = set()

        def walk(node) -> None:
            if isinstance(node, (Inverse, ZeroOrMore, OneOrMore)):
                walk(node.path)
            elif isinstance(node, Sequence):
                for step in node.steps:
                    walk(step)
            elif not isinstance(node, Var):
                out.add(node)

        for tp in self.where:
            walk(tp.subject)
            walk(tp.path)
            walk(tp.object)
        return out

    def iris(self) -> set[Iri]:
        """Every IRI constant mentioned by the query (for vocabulary lint)."""
        out: set[Iri] = set()

        def walk(node) -> None:
            if isinstance(node, Iri):
                out.add(node)
            elif isinstance(node, (Inverse, ZeroOrMore, OneOrMore)):
                walk(node.path)
            elif isinstance(node, Sequence):
                for step in node.steps:
                    walk(step)

        for tp in (*self.where, *self.template):
            walk(tp.subject)
            walk(tp.path)
            walk(tp.object)
        for f in self.filters:
            walk(f.left)
            walk(f.right)
        return out
