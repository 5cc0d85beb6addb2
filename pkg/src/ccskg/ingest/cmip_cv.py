"""CMIP controlled-vocabulary (JSON) parser: institutions and models."""
from __future__ import annotations

from .cmor import _load_json
from .records import InstitutionRecord, ModelRecord, WarningLog

SOURCE = "cmip-cv"


def parse_cmip_cv(data: bytes, log: WarningLog | None = None) -> tuple[list[InstitutionRecord], list[ModelRecord]]:
    log = WarningLog() if log is None else log
    doc = _load_json(data, "CMIP CV")
    cv = doc.get("CV", doc)
    institutions = []
    for inst_id, name in (cv.get("institution_id") or {}).items():
        institutions.append(InstitutionRecord(inst_id, name if isinstance(name, str) else ""))
    known = {i.institution_id for i in institutions}
    models = []
    for model_id, entry in (cv.get("source_id") or {}).items():
        entry = entry if isinstance(entry, dict) else {}
        refs = entry.get("institution_id") or []
        if isinstance(refs, str):
            refs = [refs]
        linked = []
        for ref in refs:
            if ref in known:
                linked.append(ref)
            else:
                log.warn(SOURCE, model_id, f"unknown institution {ref}")
        name = entry.get("label_extended") or entry.get("label") or ""
        models.append(ModelRecord(model_id, name, tuple(linked)))
    return institutions, models
