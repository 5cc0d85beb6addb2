"""Ontology term registry and instance IRI minting.

One registry holds every class and property the knowledge graph uses, across
the three ontology modules (``top:``, ``ccso:`` and ``data:``). Instance IRIs
live under a separate data namespace and are minted deterministically from
record fields, so mapping the same record twice yields the same node.
"""
from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import quote

from .rdf.namespace import STANDARD_PREFIXES, compact_iri
from .rdf.store import GraphStore
from .rdf.terms import (
    OWL,
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    Iri,
    Literal,
    Quad,
)
from .rdf.turtle import serialize_turtle

DEFAULT_BASE_IRI = "http://localhost:8000/"

CLASS = "class"
OBJECT_PROPERTY = "object-property"
DATATYPE_PROPERTY = "datatype-property"

_KIND_TYPE = {
    CLASS: Iri(OWL + "Class"),
    OBJECT_PROPERTY: Iri(OWL + "ObjectProperty"),
    DATATYPE_PROPERTY: Iri(OWL + "DatatypeProperty"),
}

ONTOLOGY_PREFIXES = ("top", "ccso", "data")

# (curie, kind, label, super-curie)
REGISTRY: list[tuple[str, str, str, str | None]] = [
    # top-level
    ("top:hasPart", OBJECT_PROPERTY, "has part", None),
    # climate models
    ("ccso:Model", CLASS, "model", None),
    ("ccso:ClimateModel", CLASS, "climate model", "ccso:Model"),
    ("ccso:GlobalClimateModel", CLASS, "global climate model", "ccso:ClimateModel"),
    ("ccso:RegionalClimateModel", CLASS, "regional climate model", "ccso:ClimateModel"),
    ("ccso:LocalClimateModel", CLASS, "local climate model", "ccso:ClimateModel"),
    ("ccso:ConvectionPermittingModel", CLASS, "convection permitting model", "ccso:LocalClimateModel"),
    ("ccso:IntegratedAssessmentModel", CLASS, "integrated assessment model", "ccso:Model"),
    ("ccso:Institution", CLASS, "institution", None),
    # simulations
    ("ccso:Simulation", CLASS, "simulation", None),
    ("ccso:ModelBasedSimulation", CLASS, "model based simulation", "ccso:Simulation"),
    ("ccso:ClimateModelSimulation", CLASS, "climate model simulation", "ccso:ModelBasedSimulation"),
    ("ccso:GlobalClimateSimulation", CLASS, "global climate simulation", "ccso:ClimateModelSimulation"),
    ("ccso:DynamicalDownscaling", CLASS, "dynamical downscaling", "ccso:ClimateModelSimulation"),
    ("ccso:EmissionScenario", CLASS, "emission scenario", None),
    ("ccso:RCP", CLASS, "representative concentration pathway", "ccso:EmissionScenario"),
    ("ccso:SSP", CLASS, "shared socio-economic pathway", "ccso:EmissionScenario"),
    ("ccso:refersToScenario", OBJECT_PROPERTY, "refers to scenario", None),
    ("ccso:hasOutput", OBJECT_PROPERTY, "has output", None),
    ("ccso:isDownscalingOf", OBJECT_PROPERTY, "is downscaling of", None),
    ("ccso:isExecutionOf", OBJECT_PROPERTY, "is execution of", None),
    ("ccso:isDevelopedBy", OBJECT_PROPERTY, "is developed by", None),
    # variables and dimensional spaces
    ("data:Variable", CLASS, "variable", None),
    ("data:DependentVariable", CLASS, "dependent variable", "data:Variable"),
    ("data:IndependentVariable", CLASS, "independent variable", "data:Variable"),
    ("data:FiniteVariable", CLASS, "finite variable", "data:Variable"),
    ("data:DimensionalSpace", CLASS, "dimensional space", "data:IndependentVariable"),
    ("data:FiniteDimensionalSpace", CLASS, "finite dimensional space", "data:DimensionalSpace"),
    ("data:Continuum", CLASS, "continuum", "data:DimensionalSpace"),
    ("data:DiscreteDimensionalSpace", CLASS, "discrete dimensional space", "data:DimensionalSpace"),
    ("data:Grid", CLASS, "grid", "data:DiscreteDimensionalSpace"),
    ("data:RollingRegularGrid", CLASS, "rolling regular grid", "data:Grid"),
    ("data:Region", CLASS, "region", None),
    ("data:Dataset", CLASS, "dataset", None),
    ("data:DataSource", CLASS, "data source", None),
    ("data:DataFormat", CLASS, "data format", None),
    ("data:hasValuesOn", OBJECT_PROPERTY, "has values on", None),
    ("data:hasDataSerialisation", OBJECT_PROPERTY, "has data serialisation", None),
    ("data:hasAvailableDataFormat", OBJECT_PROPERTY, "has available data format", None),
    ("data:isSpecializationOfVariable", OBJECT_PROPERTY, "is specialization of variable", None),
    ("data:holdsSpecializationOfVariable", OBJECT_PROPERTY, "holds specialization of variable", None),
    ("data:derivedFromVariable", OBJECT_PROPERTY, "derived from variable", None),
    ("data:dependsOnVariable", OBJECT_PROPERTY, "depends on variable", None),
    ("data:hasDiscretization", OBJECT_PROPERTY, "has discretization", None),
    ("data:coversRegion", OBJECT_PROPERTY, "covers region", None),
    ("data:hasResolutionValue", DATATYPE_PROPERTY, "has resolution value", None),
    ("data:hasUnit", DATATYPE_PROPERTY, "has unit", None),
    ("data:hasCellMethods", DATATYPE_PROPERTY, "has cell methods", None),
    ("data:isRotatedPole", DATATYPE_PROPERTY, "is rotated pole", None),
]

# experiment facet -> (scenario family prefix, individual local name)
SCENARIOS: dict[str, tuple[str, str]] = {
    "rcp26": ("rcp", "RCP2.6"),
    "rcp45": ("rcp", "RCP4.5"),
    "rcp60": ("rcp", "RCP6.0"),
    "rcp85": ("rcp", "RCP8.5"),
    "ssp119": ("ssp", "SSP1-1.9"),
    "ssp126": ("ssp", "SSP1-2.6"),
    "ssp245": ("ssp", "SSP2-4.5"),
    "ssp370": ("ssp", "SSP3-7.0"),
    "ssp585": ("ssp", "SSP5-8.5"),
}
SCENARIO_CLASS = {"rcp": "ccso:RCP", "ssp": "ccso:SSP"}
NON_SCENARIO_EXPERIMENTS = frozenset({"historical", "piControl", "evaluation", "amip", "abrupt4xCO2", "1pctCO2"})


class VocabError(ValueError):
    pass


@dataclass(frozen=True)
class VocabTerm:
    curie: str
    iri: str
    kind: str
    label: str
    parent: str | None = None


def _enc(value: str) -> str:
    return quote(str(value), safe="-._~")


class IriMinter:
    """Deterministic instance IRIs under the data namespace.

    Field values are percent-encoded, so distinct values never collide.
    """

    def __init__(self, data_base: str) -> None:
        self.base = data_base

    def _iri(self, *parts: str) -> Iri:
        return Iri(self.base + "/".join(parts))

    def cf_variable(self, name: str) -> Iri:
        return self._iri("variable", "cf", _enc(name))

    def mip_variable(self, name: str) -> Iri:
        return self._iri("variable", "mip", _enc(name))

    def climdex_index(self, name: str) -> Iri:
        return self._iri("variable", "climdex", _enc(name))

    def axis_variable(self, dimension: str, discretization: str) -> Iri:
        return self._iri("variable", "axis", _enc(dimension), _enc(discretization))

    def dimension(self, name: str) -> Iri:
        return self._iri("dimension", _enc(name))

    def model(self, name: str) -> Iri:
        return self._iri("model", _enc(name))

    def institution(self, name: str) -> Iri:
        return self._iri("institution", _enc(name))

    def simulation(self, *facets: str) -> Iri:
        # dots separate facets, so a dot inside a facet must be escaped
        return self._iri("simulation", ".".join(_enc(f).replace(".", "%2E") for f in facets))

    def output(self, simulation: Iri, label: str) -> Iri:
        return Iri(f"{simulation.value}/{_enc(label)}")

    def dataset(self, output: Iri, suffix: str) -> Iri:
        return Iri(f"{output.value}/{_enc(suffix)}")

    def scenario(self, family: str, name: str) -> Iri:
        return self._iri("scenario", _enc(family), _enc(name))

    def domain(self, name: str) -> Iri:
        return self._iri("domain", _enc(name))

    def grid(self, name: str) -> Iri:
        return self._iri("grid", _enc(name))

    def time_grid(self, duration: str) -> Iri:
        return self._iri("grid", "time", _enc(duration))

    def graph(self, name: str) -> Iri:
        return self._iri("graph", _enc(name))


class Vocabulary:
    """Registry of ontology terms plus the prefix map for a given base IRI."""

    def __init__(self, base_iri: str = DEFAULT_BASE_IRI, registry=REGISTRY) -> None:
        if not base_iri.endswith("/"):
            base_iri += "/"
        self.base_iri = base_iri
        onto = base_iri + "onto/"
        data = base_iri + "data/cs/"
        self.data_base = data
        self.minter = IriMinter(data)
        self.prefixes: dict[str, str] = {
            **STANDARD_PREFIXES,
            "top": onto + "top-level/",
            "ccso": onto + "ccso/",
            "data": onto + "data/",
            "cf": data + "variable/cf/",
            "mip": data + "variable/mip/",
            "climdex": data + "variable/climdex/",
            "axis": data + "variable/axis/",
            "dim": data + "dimension/",
            "dimension": data + "dimension/",
            "model": data + "model/",
            "institution": data + "institution/",
            "sim": data + "simulation/",
            "rcp": data + "scenario/rcp/",
            "ssp": data + "scenario/ssp/",
            "domain": data + "domain/",
            "grid": data + "grid/",
            "graph": data + "graph/",
        }
        # aliases expand like their canonical prefix but are never produced by compact()
        self.aliases = {"dimension": "dim"}
        self.terms: dict[str, VocabTerm] = {}
        for curie, kind, label, parent in registry:
            if curie in self.terms:
                raise VocabError(f"duplicate registry term {curie}")
            self.terms[curie] = VocabTerm(curie, self._expand_str(curie), kind, label, parent)
        self._by_iri = {t.iri: t for t in self.terms.values()}
        for t in self.terms.values():
            if t.parent is not None and t.parent not in self.terms:
                raise VocabError(f"{t.curie} declares unknown parent {t.parent}")
        self._check_acyclic()
        self.ontology_graph = self.minter.graph("ontology")
        self.consolidated_graph = self.minter.graph("consolidated")

    def _check_acyclic(self) -> None:
        for curie in self.terms:
            seen = {curie}
            parent = self.terms[curie].parent
            while parent is not None:
                if parent in seen:
                    raise VocabError(f"subclass cycle through {curie}")
                seen.add(parent)
                parent = self.terms[parent].parent

    def _expand_str(self, curie: str) -> str:
        prefix, sep, local = curie.partition(":")
        if not sep:
            raise VocabError(f"not a prefixed name: {curie!r}")
        if prefix not in self.prefixes:
            raise VocabError(f"unknown prefix {prefix!r} in {curie!r}")
        return self.prefixes[prefix] + local

    def expand(self, curie: str) -> Iri:
        return Iri(self._expand_str(curie))

    def compact(self, iri: Iri | str) -> str | None:
        value = iri.value if isinstance(iri, Iri) else iri
        canonical = {p: ns for p, ns in self.prefixes.items() if p not in self.aliases}
        return compact_iri(value, canonical)

    @property
    def output_prefixes(self) -> dict[str, str]:
        """Prefix map without aliases, for serializers."""
        return {p: ns for p, ns in self.prefixes.items() if p not in self.aliases}

    def __contains__(self, curie: str) -> bool:
        return curie in self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def term(self, curie: str) -> VocabTerm:
        try:
            return self.terms[curie]
        except KeyError:
            raise VocabError(f"{curie} is not a registered ontology term") from None

    def iri(self, curie: str) -> Iri:
        """Expand a registered ontology term; unregistered ontology curies are errors."""
        prefix = curie.partition(":")[0]
        if prefix in ONTOLOGY_PREFIXES and curie not in self.terms:
            raise VocabError(f"{curie} is not a registered ontology term")
        return self.expand(curie)

    def is_ontology_iri(self, iri: Iri | str) -> bool:
        value = iri.value if isinstance(iri, Iri) else iri
        return any(value.startswith(self.prefixes[p]) for p in ONTOLOGY_PREFIXES)

    def unknown_terms(self, iris) -> list[str]:
        """IRIs in an ontology namespace that are not registered (lint)."""
        bad = set()
        for iri in iris:
            value = iri.value if isinstance(iri, Iri) else iri
            if self.is_ontology_iri(value) and value not in self._by_iri:
                bad.add(value)
        return sorted(bad)

    def superclasses(self, curie: str) -> list[str]:
        """Strict ancestors of ``curie``, nearest first."""
        out = []
        parent = self.term(curie).parent
        while parent is not None:
            out.append(parent)
            parent = self.terms[parent].parent
        return out

    def emit_ontology_graph(self) -> set[Quad]:
        g = self.ontology_graph
        quads = set()
        for t in self.terms.values():
            node = Iri(t.iri)
            quads.add(Quad(node, RDF_TYPE, _KIND_TYPE[t.kind], g))
            quads.add(Quad(node, RDFS_LABEL, Literal(t.label), g))
            if t.parent is not None:
                link = RDFS_SUBCLASSOF if t.kind == CLASS else RDFS_SUBPROPERTYOF
                quads.add(Quad(node, link, Iri(self.terms[t.parent].iri), g))
        return quads

    def export_turtle(self) -> bytes:
        """The registry as a standalone ontology document."""
        store = GraphStore(self.emit_ontology_graph())
        prefixes = {p: self.prefixes[p] for p in ("rdf", "rdfs", "owl", "xsd", *ONTOLOGY_PREFIXES)}
        return serialize_turtle(store, prefixes, graphs=False)

    def scenario_for(self, experiment: str) -> tuple[Iri, str, str] | None:
        """(scenario IRI, class curie, label) for a scenario experiment facet."""
        entry = SCENARIOS.get(experiment.lower())
        if entry is None:
            return None
        family, name = entry
        return self.minter.scenario(family, name), SCENARIO_CLASS[family], name
