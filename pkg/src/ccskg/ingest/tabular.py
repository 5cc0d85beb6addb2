"""CSV sources: CORDEX domain table and Climdex index definitions."""
from __future__ import annotations

import csv
import io
import re
from collections.abc import Iterable

from .cf import SourceError
from .records import ClimdexIndex, CordexDomain, WarningLog

# "EUR-44i": the trailing i marks a regular lat/lon (interpolated) grid
_INTERPOLATED = re.compile(r"-\d+i$")


def _rows(data: bytes, required: tuple[str, ...], what: str) -> csv.DictReader:
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise SourceError(f"{what} is not UTF-8: {exc}") from None
    header_line = text.split("\n", 1)[0]
    delimiter = max(",;\t", key=header_line.count)
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    header = reader.fieldnames or []
    missing = [c for c in required if c not in header]
    if text.strip() and missing:
        raise SourceError(f"{what} lacks column(s): {', '.join(missing)}")
    return reader


def is_rotated_pole(grid_name: str) -> bool:
    return not _INTERPOLATED.search(grid_name)


def parse_cordex_domains(data: bytes, log: WarningLog | None = None) -> list[CordexDomain]:
    """Columns ``name``, ``region``, ``resolution`` and optionally ``grid``."""
    log = WarningLog() if log is None else log
    records = []
    for rowno, row in enumerate(_rows(data, ("name", "region", "resolution"), "CORDEX domain table"), start=2):
        name = (row.get("name") or "").strip()
        if not name:
            log.warn("cordex-domains", f"line{rowno}", "missing domain name", dropped=True)
            continue
        raw = (row.get("resolution") or "").strip()
        try:
            resolution = float(raw)
        except ValueError:
            log.warn("cordex-domains", name, f"non-numeric resolution {raw!r}", dropped=True)
            continue
        if resolution <= 0:
            log.warn("cordex-domains", name, f"non-positive resolution {raw!r}", dropped=True)
            continue
        grid = (row.get("grid") or "").strip() or name
        records.append(CordexDomain(name, (row.get("region") or "").strip(), resolution, is_rotated_pole(name), grid))
    return records


def parse_climdex(
    data: bytes, mip_names: Iterable[str] | None = None, log: WarningLog | None = None
) -> list[ClimdexIndex]:
    """Columns ``index``, ``definition`` and ``variable`` (the source MIP variable)."""
    log = WarningLog() if log is None else log
    known = set(mip_names) if mip_names is not None else None
    records = []
    for rowno, row in enumerate(_rows(data, ("index", "definition", "variable"), "Climdex table"), start=2):
        index_id = (row.get("index") or "").strip()
        variable = (row.get("variable") or "").strip()
        if not index_id:
            log.warn("climdex", f"line{rowno}", "missing index id", dropped=True)
            continue
        if not variable or (known is not None and variable not in known):
            log.warn("climdex", index_id, f"source variable {variable or '(none)'} not a known MIP variable", dropped=True)
            continue
        records.append(ClimdexIndex(index_id, (row.get("definition") or "").strip(), variable))
    return records
