"""Prefix-map helpers shared by the serializers, the vocabulary and the server."""
from __future__ import annotations

import re

from .terms import OWL, RDF, RDFS, XSD

STANDARD_PREFIXES = {
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "owl": OWL,
}

_PN_LOCAL = re.compile(
    r"^(?:(?:[A-Za-z0-9_]|%[0-9A-Fa-f]{2})"
    r"(?:(?:[A-Za-z0-9_.\-]|%[0-9A-Fa-f]{2})*(?:[A-Za-z0-9_\-]|%[0-9A-Fa-f]{2}))?)?$"
)
_PN_PREFIX = re.compile(r"^(?:[A-Za-z](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?$")


def is_local_name(text: str) -> bool:
    return bool(_PN_LOCAL.match(text))


def is_prefix_name(text: str) -> bool:
    return bool(_PN_PREFIX.match(text))


def compact_iri(iri: str, prefixes: dict[str, str]) -> str | None:
    """Shortest valid prefixed name for ``iri``, or None.

    The longest matching namespace wins; ties go to the alphabetically first
    prefix so the result is deterministic.
    """
    best: tuple[int, str] | None = None
    for prefix, ns in prefixes.items():
        if not ns or not iri.startswith(ns):
            continue
        local = iri[len(ns):]
        if not is_local_name(local):
            continue
        key = (-len(ns), prefix)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    prefix = best[1]
    return f"{prefix}:{iri[len(prefixes[prefix]):]}"
