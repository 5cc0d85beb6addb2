"""Declarative per-source cleansing: record filters and value renames.

Each transform is one line of text::

    skip <field>=<value>          drop records whose field equals value
    rename <field> <old> <new>    rewrite a field value

Every dropped or rewritten record is logged.
"""
from __future__ import annotations

import dataclasses
import shlex
from dataclasses import dataclass

from .records import WarningLog


class CleansingError(ValueError):
    pass


@dataclass(frozen=True)
class Transform:
    action: str
    field: str
    value: str
    replacement: str | None = None


def parse_transform(text: str) -> Transform:
    parts = shlex.split(text)
    if len(parts) == 2 and parts[0] == "skip" and "=" in parts[1]:
        field, value = parts[1].split("=", 1)
        return Transform("skip", field, value)
    if len(parts) == 4 and parts[0] == "rename":
        return Transform("rename", parts[1], parts[2], parts[3])
    raise CleansingError(f"cannot parse cleansing transform {text!r}")


def _locator(record) -> str:
    for name in ("standard_name", "short_name", "model_id", "institution_id", "index_id", "name", "dataset_id"):
        if hasattr(record, name):
            return str(getattr(record, name))
    return repr(record)


def _get(record, field: str):
    if hasattr(record, field):
        return getattr(record, field)
    drs = getattr(record, "drs", None)
    if drs is not None and hasattr(drs, field):
        return getattr(drs, field)
    raise CleansingError(f"record kind {type(record).__name__} has no field {field!r}")


def _set(record, field: str, value):
    if field in {f.name for f in dataclasses.fields(record)}:
        return dataclasses.replace(record, **{field: value})
    drs = getattr(record, "drs", None)
    return dataclasses.replace(record, drs=dataclasses.replace(drs, **{field: value}))


def apply_transforms(records: list, transforms: list[Transform], source: str, log: WarningLog) -> list:
    out = []
    for record in records:
        keep = True
        for t in transforms:
            current = _get(record, t.field)
            if str(current) != t.value:
                continue
            if t.action == "skip":
                log.warn(source, _locator(record), f"cleansing: skipped ({t.field}={t.value})", dropped=True)
                keep = False
                break
            record = _set(record, t.field, t.replacement)
            log.warn(source, _locator(record), f"cleansing: {t.field} {t.value} -> {t.replacement}")
        if keep:
            out.append(record)
    return out
