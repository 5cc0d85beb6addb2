"""SPARQL-results JSON serialization."""
from __future__ import annotations

import json

from ..rdf.namespace import compact_iri
from ..rdf.terms import XSD_STRING, BlankNode, Iri, Literal, Term
from .evaluate import Result

MEDIA_TYPE = "application/sparql-results+json"


def term_json(term: Term) -> dict[str, str]:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    assert isinstance(term, Literal)
    out = {"type": "literal", "value": term.lexical}
    if term.language is not None:
        out["xml:lang"] = term.language
    elif term.datatype != XSD_STRING:
        out["datatype"] = term.datatype
    return out


def to_json_obj(result: Result) -> dict:
    return {
        "head": {"vars": list(result.variables)},
        "results": {
            "bindings": [
                {v: term_json(row[v]) for v in result.variables if v in row} for row in result.rows
            ]
        },
    }


def to_json(result: Result) -> bytes:
    """Compact, key-order-stable JSON bytes."""
    return json.dumps(to_json_obj(result), ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def to_table(result: Result, prefixes: dict[str, str] | None = None) -> str:
    """Tab-separated rendering for the command line; terms shown as N-Triples or curies."""

    def show(term: Term | None) -> str:
        if term is None:
            return ""
        if isinstance(term, Iri) and prefixes:
            return compact_iri(term.value, prefixes) or term.nt
        return term.nt

    lines = ["\t".join(f"?{v}" for v in result.variables)]
    lines.extend("\t".join(show(row.get(v)) for v in result.variables) for row in result.rows)
    return "\n".join(lines) + "\n"
