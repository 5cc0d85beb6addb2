"""Data Reference Syntax identifiers for CMIP5 and CORDEX.

Accepted layouts (dot separated, trailing ``vYYYYMMDD`` version optional on
the long forms)::

    cmip5.<model>.<experiment>.<ensemble>
    cmip5.<product>.<institute>.<model>.<experiment>.<frequency>.<realm>.<table>.<ensemble>
    cordex.<model>.<experiment>.<ensemble>
    cordex.<product>.<domain>.<institute>.<driving-model>.<experiment>.<ensemble>
          .<rcm-model>.<rcm-version>.<frequency>.<variable>
"""
from __future__ import annotations

import csv
import io
import re

from .cf import SourceError
from .records import DatasetRecord, DrsComponents, Ensemble, WarningLog

_ENSEMBLE = re.compile(r"^r(\d+)i(\d+)p(\d+)$")
_VERSION = re.compile(r"^v\d+$")

PROJECTS = ("cmip5", "cordex")

LONG_FACETS = {
    "cmip5": ("project", "product", "institute", "model", "experiment", "frequency", "realm", "table", "ensemble"),
    "cordex": (
        "project", "product", "domain", "institute", "driving_model", "experiment",
        "ensemble", "model", "rcm_version", "frequency", "variable",
    ),
}
SHORT_FACETS = ("project", "model", "experiment", "ensemble")

# CMIP/CORDEX frequency facet -> ISO-8601 duration of the time step
FREQUENCY_DURATIONS = {
    "yr": "P1Y",
    "mon": "P1M",
    "sem": "P3M",
    "day": "P1D",
    "6hr": "PT6H",
    "3hr": "PT3H",
    "1hr": "PT1H",
}


class DrsError(ValueError):
    pass


def parse_ensemble(text: str) -> Ensemble:
    m = _ENSEMBLE.match(text)
    if not m:
        raise DrsError(f"ensemble member {text!r} does not match r<N>i<N>p<N>")
    r, i, p = (int(x) for x in m.groups())
    if min(r, i, p) < 1:
        raise DrsError(f"ensemble member {text!r} has a non-positive index")
    return Ensemble(r, i, p)


def parse_drs_id(text: str, project: str | None = None) -> DrsComponents:
    facets = text.strip().split(".")
    if any(not f for f in facets):
        raise DrsError(f"empty facet in {text!r}")
    declared = facets[0].lower()
    project = (project or declared).lower()
    if project not in PROJECTS:
        raise DrsError(f"unsupported project {project!r}")
    if declared != project:
        raise DrsError(f"id {text!r} does not belong to project {project}")
    version = None
    if len(facets) == len(SHORT_FACETS):
        names = SHORT_FACETS
    else:
        long_names = LONG_FACETS[project]
        if len(facets) == len(long_names) + 1 and _VERSION.match(facets[-1]):
            version = facets.pop()
        if len(facets) != len(long_names):
            raise DrsError(
                f"{project} id {text!r} has {len(facets) + (version is not None)} facets; "
                f"expected {len(SHORT_FACETS)} or {len(long_names)} (+ optional version)"
            )
        names = long_names
    values = dict(zip(names, facets))
    values["project"] = project
    values["ensemble"] = parse_ensemble(values["ensemble"])
    return DrsComponents(**values, version=version)


def _split_variables(text: str) -> tuple[str, ...]:
    return tuple(v for v in re.split(r"[\s;,]+", text.strip()) if v)


def parse_dataset_listing(data: bytes, project: str, log: WarningLog | None = None) -> list[DatasetRecord]:
    """Dataset rows: ``dataset_id`` plus optional ``variables``, ``grid``,
    ``geodetic_resolution`` and ``temporal_resolution`` columns.

    Rows with a malformed id, a short-form id, or no usable variables are
    rejected with a warning.
    """
    log = WarningLog() if log is None else log
    source = f"{project}-datasets"
    try:
        reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
    except UnicodeDecodeError as exc:
        raise SourceError(f"dataset listing is not UTF-8: {exc}") from None
    if reader.fieldnames is None or "dataset_id" not in reader.fieldnames:
        raise SourceError("dataset listing lacks a dataset_id column")
    records = []
    for rowno, row in enumerate(reader, start=2):
        locator = f"line{rowno}"
        ident = (row.get("dataset_id") or "").strip()
        try:
            drs = parse_drs_id(ident, project)
        except DrsError as exc:
            log.warn(source, locator, str(exc), dropped=True)
            continue
        if not drs.is_long_form:
            log.warn(source, locator, "short-form id names a simulation, not a dataset", dropped=True)
            continue
        variables = _split_variables(row.get("variables") or "")
        if drs.variable and not variables:
            variables = (drs.variable,)
        if not variables:
            log.warn(source, locator, "no variables listed", dropped=True)
            continue
        geo = (row.get("geodetic_resolution") or "").strip() or None
        if geo is not None:
            try:
                if float(geo) <= 0:
                    raise ValueError
            except ValueError:
                log.warn(source, locator, f"bad geodetic resolution {geo!r}", dropped=True)
                continue
        temporal = (row.get("temporal_resolution") or "").strip() or FREQUENCY_DURATIONS.get(drs.frequency or "")
        grid = (row.get("grid") or "").strip() or drs.domain
        records.append(DatasetRecord(drs, ident, variables, grid, geo, temporal))
    return records
