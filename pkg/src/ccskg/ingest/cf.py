"""CF standard-name table (XML) parser."""
from __future__ import annotations

import xml.etree.ElementTree as ET

from .records import CfVariable, WarningLog

SOURCE = "cf"


class SourceError(ValueError):
    """A source document cannot be read at all (the whole source fails)."""


def _text(entry: ET.Element, tag: str) -> str:
    child = entry.find(tag)
    if child is None or child.text is None:
        return ""
    return child.text.strip()


def parse_cf_table(data: bytes, log: WarningLog | None = None) -> list[CfVariable]:
    """One record per ``<entry>`` element, in document order.

    Entries without an ``id`` or repeating an earlier id are skipped and logged.
    """
    log = WarningLog() if log is None else log
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SourceError(f"malformed CF standard-name table: {exc}") from None
    records = []
    seen: set[str] = set()
    for n, entry in enumerate(root.iter("entry"), start=1):
        name = (entry.get("id") or "").strip()
        if not name:
            log.warn(SOURCE, f"entry#{n}", "missing id attribute", dropped=True)
            continue
        if name in seen:
            log.warn(SOURCE, name, "duplicate standard name", dropped=True)
            continue
        seen.add(name)
        records.append(CfVariable(name, _text(entry, "canonical_units"), _text(entry, "description")))
    return records
