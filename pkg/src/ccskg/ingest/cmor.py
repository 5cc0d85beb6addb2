"""CMOR MIP table (JSON) parser."""
from __future__ import annotations

import json
from collections.abc import Iterable

from .cf import SourceError
from .records import MipVariable, WarningLog

SOURCE = "cmor"


def _load_json(data: bytes, what: str) -> dict:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SourceError(f"malformed {what}: {exc}") from None
    if not isinstance(doc, dict):
        raise SourceError(f"malformed {what}: top level is not an object")
    return doc


def parse_cmor_table(
    data: bytes, cf_names: Iterable[str] | None = None, log: WarningLog | None = None
) -> list[MipVariable]:
    """One MipVariable per ``variable_entry`` member.

    A missing standard name, or one absent from ``cf_names`` when given, flags
    the record as unresolved; the record is still returned.
    """
    log = WarningLog() if log is None else log
    doc = _load_json(data, "CMOR table")
    entries = doc.get("variable_entry", {})
    if not isinstance(entries, dict):
        raise SourceError("variable_entry is not an object")
    table = str(doc.get("Header", {}).get("table_id", "")).replace("Table ", "").strip()
    known = set(cf_names) if cf_names is not None else None
    records = []
    for key, entry in entries.items():
        if not isinstance(entry, dict):
            log.warn(SOURCE, f"{table}:{key}", "variable entry is not an object", dropped=True)
            continue
        short = (entry.get("out_name") or key).strip()
        std = (entry.get("standard_name") or "").strip() or None
        unresolved = False
        if std is None:
            unresolved = True
            log.warn(SOURCE, f"{table}:{short}", "missing standard_name")
        elif known is not None and std not in known:
            unresolved = True
            log.warn(SOURCE, f"{table}:{short}", f"standard_name {std} not in CF table")
        positive = (entry.get("positive") or "").strip() or None
        records.append(
            MipVariable(
                short_name=short,
                standard_name=std,
                cell_methods=entry.get("cell_methods") or "",
                realm=(entry.get("modeling_realm") or "").strip(),
                positive=positive,
                table=table,
                unresolved=unresolved,
                long_name=(entry.get("long_name") or "").strip(),
            )
        )
    return records


def merge_mip_variables(tables: Iterable[list[MipVariable]]) -> list[MipVariable]:
    """Distinct MIP variables across tables (first occurrence of a short name wins)."""
    out: dict[str, MipVariable] = {}
    for records in tables:
        for rec in records:
            out.setdefault(rec.short_name, rec)
    return list(out.values())
