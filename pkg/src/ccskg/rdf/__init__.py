"""RDF substrate: terms, the quad store and its serializations."""
from .isomorphism import IsomorphismLimitError, isomorphic
from .nquads import DEFAULT_GRAPH, RdfSyntaxError, parse_nquads, serialize_nquads, serialize_ntriples
from .store import GraphStore
from .terms import (
    OWL,
    RDF,
    RDF_LANGSTRING,
    RDF_TYPE,
    RDFS,
    RDFS_COMMENT,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    XSD,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Quad,
    Term,
    TermError,
)
from .turtle import parse_turtle, serialize_turtle, serialize_turtle_triples


def serialize(store: GraphStore, format: str = "nquads", prefixes: dict[str, str] | None = None) -> bytes:
    if format == "nquads":
        return serialize_nquads(store)
    if format == "turtle":
        return serialize_turtle(store, prefixes)
    raise ValueError(f"unknown RDF format {format!r}")


def parse(data: bytes | str, format: str = "nquads", default_graph: Iri = DEFAULT_GRAPH) -> GraphStore:
    if format == "nquads":
        return parse_nquads(data, default_graph)
    if format == "turtle":
        return parse_turtle(data, default_graph)
    raise ValueError(f"unknown RDF format {format!r}")


__all__ = [name for name in dir() if not name.startswith("_")]
