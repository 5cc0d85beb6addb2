"""RDF terms and quads.

Terms are immutable value objects compared structurally. Every term knows its
N-Triples form (``nt``), which doubles as the canonical sort key used by the
serializers and by the query engine's deterministic ordering.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
OWL = "http://www.w3.org/2002/07/owl#"

XSD_STRING = XSD + "string"
RDF_LANGSTRING = RDF + "langString"

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_BNODE_LABEL = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?$")
_LANGTAG = re.compile(r"^[A-Za-z]+(?:-[A-Za-z0-9]+)*$")


class TermError(ValueError):
    """A term or quad violates an RDF well-formedness constraint."""


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not isinstance(self.value, str) or not _SCHEME.match(self.value):
            raise TermError(f"not an absolute IRI: {self.value!r}")
        if _IRI_FORBIDDEN.search(self.value):
            raise TermError(f"illegal character in IRI: {self.value!r}")

    @cached_property
    def nt(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not _BNODE_LABEL.match(self.label):
            raise TermError(f"illegal blank node label: {self.label!r}")

    @cached_property
    def nt(self) -> str:
        return f"_:{self.label}"

    def __str__(self) -> str:
        return self.nt


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.lexical, str):
            raise TermError(f"literal lexical form must be a string, got {type(self.lexical).__name__}")
        if self.language is not None:
            if not _LANGTAG.match(self.language):
                raise TermError(f"illegal language tag: {self.language!r}")
            if self.datatype not in (XSD_STRING, RDF_LANGSTRING):
                raise TermError("a literal cannot carry both a language tag and a datatype")
            object.__setattr__(self, "datatype", RDF_LANGSTRING)
        elif self.datatype == RDF_LANGSTRING:
            raise TermError("rdf:langString literal requires a language tag")
        if not _SCHEME.match(self.datatype):
            raise TermError(f"datatype is not an absolute IRI: {self.datatype!r}")

    @cached_property
    def nt(self) -> str:
        text = f'"{escape_string(self.lexical)}"'
        if self.language is not None:
            return f"{text}@{self.language}"
        if self.datatype == XSD_STRING:
            return text
        return f"{text}^^<{self.datatype}>"

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, BlankNode, Literal]

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Quad:
    subject: Iri | BlankNode
    predicate: Iri
    object: Term
    graph: Iri

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TermError(f"subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TermError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise TermError(f"object must be an RDF term, got {self.object!r}")
        if not isinstance(self.graph, Iri):
            raise TermError(f"graph name must be an IRI, got {self.graph!r}")

    @property
    def triple(self) -> tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.graph.nt, self.subject.nt, self.predicate.nt, self.object.nt)

    def to_nquads(self) -> str:
        return f"{self.subject.nt} {self.predicate.nt} {self.object.nt} {self.graph.nt} ."


RDF_TYPE = Iri(RDF + "type")
RDFS_LABEL = Iri(RDFS + "label")
RDFS_COMMENT = Iri(RDFS + "comment")
RDFS_SUBCLASSOF = Iri(RDFS + "subClassOf")
RDFS_SUBPROPERTYOF = Iri(RDFS + "subPropertyOf")


def term_kind_rank(term: Term | None) -> int:
    """Rank of a term's kind in the ordering unbound < blank < IRI < literal."""
    if term is None:
        return 0
    if isinstance(term, BlankNode):
        return 1
    if isinstance(term, Iri):
        return 2
    return 3
