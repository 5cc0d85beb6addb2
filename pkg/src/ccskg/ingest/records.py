"""Typed source records and the ingest warning log."""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field, fields


@dataclass(frozen=True)
class IngestWarning:
    source: str
    locator: str
    reason: str
    dropped: bool = False

    def __str__(self) -> str:
        return f"WARN {self.source} {self.locator} {self.reason}"


class WarningLog(list):
    """Line-oriented cleansing/ingest log. Nothing is dropped without an entry here."""

    def warn(self, source: str, locator: str, reason: str, dropped: bool = False) -> None:
        self.append(IngestWarning(source, str(locator), reason, dropped))

    @property
    def dropped(self) -> int:
        return sum(1 for w in self if w.dropped)

    def render(self) -> str:
        return "".join(f"{w}\n" for w in self)


class Record:
    """Mixin: flat field view used by the mapping rules."""

    kind: str = ""

    @classmethod
    def field_names(cls) -> frozenset[str]:
        return frozenset(f.name for f in fields(cls)) | frozenset(getattr(cls, "derived_fields", ()))

    def as_fields(self) -> dict[str, object]:
        out = asdict(self)
        for name in getattr(self, "derived_fields", ()):
            out[name] = getattr(self, name)
        return out


@dataclass(frozen=True)
class CfVariable(Record):
    standard_name: str
    canonical_units: str = ""
    description: str = ""

    kind = "cf_variable"


_TIME_METHOD = re.compile(r"\btime:\s*(\w+)")


@dataclass(frozen=True)
class MipVariable(Record):
    short_name: str
    standard_name: str | None = None
    cell_methods: str = ""
    realm: str = ""
    positive: str | None = None
    table: str = ""
    unresolved: bool = False
    long_name: str = ""

    kind = "mip_variable"
    derived_fields = ("cf_standard_name", "time_aggregation")

    @property
    def cf_standard_name(self) -> str | None:
        """The CF name this variable specializes, or None when it does not resolve."""
        return None if self.unresolved else self.standard_name

    @property
    def time_aggregation(self) -> str | None:
        m = _TIME_METHOD.search(self.cell_methods or "")
        return m.group(1) if m else None


@dataclass(frozen=True)
class Ensemble:
    realization: int
    initialization: int
    physics: int

    def __str__(self) -> str:
        return f"r{self.realization}i{self.initialization}p{self.physics}"


@dataclass(frozen=True)
class DrsComponents(Record):
    project: str
    model: str
    experiment: str
    ensemble: Ensemble
    product: str | None = None
    institute: str | None = None
    frequency: str | None = None
    realm: str | None = None
    table: str | None = None
    domain: str | None = None
    driving_model: str | None = None
    rcm_version: str | None = None
    variable: str | None = None
    version: str | None = None

    kind = "drs"

    @property
    def is_long_form(self) -> bool:
        return self.product is not None


@dataclass(frozen=True)
class DatasetRecord(Record):
    """One dataset listing row: a DRS id plus the facets the id does not carry."""

    drs: DrsComponents
    dataset_id: str
    variables: tuple[str, ...] = ()
    grid: str | None = None
    geodetic_resolution: str | None = None
    temporal_resolution: str | None = None

    kind = "dataset"


@dataclass(frozen=True)
class CordexDomain(Record):
    name: str
    region: str
    resolution: float
    rotated_pole: bool
    grid_id: str

    kind = "cordex_domain"
    derived_fields = ("region_code",)

    @property
    def region_code(self) -> str:
        return self.name.split("-", 1)[0]


@dataclass(frozen=True)
class ClimdexIndex(Record):
    index_id: str
    definition: str
    source_variable: str

    kind = "climdex_index"


@dataclass(frozen=True)
class InstitutionRecord(Record):
    institution_id: str
    name: str = ""

    kind = "institution"


@dataclass(frozen=True)
class ModelRecord(Record):
    model_id: str
    name: str = ""
    institution_ids: tuple[str, ...] = field(default=())

    kind = "model"
    derived_fields = ("institution_id",)

    @property
    def institution_id(self) -> str | None:
        return self.institution_ids[0] if self.institution_ids else None


RECORD_KINDS: dict[str, type[Record]] = {
    cls.kind: cls
    for cls in (CfVariable, MipVariable, CordexDomain, ClimdexIndex, InstitutionRecord, ModelRecord)
}
