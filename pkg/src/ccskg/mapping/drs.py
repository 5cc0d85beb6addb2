"""Built-in mapper for dataset identifiers.

Flat dataset metadata is given depth here: records are grouped into
simulations, their outputs and the datasets of each output. Grouping across
records is why this is code rather than a declarative rule.
"""
from __future__ import annotations

from collections.abc import Iterable

from ..ingest.records import DatasetRecord, DrsComponents, WarningLog
from ..rdf.terms import RDF_TYPE, RDFS_LABEL, XSD, Iri, Literal, Quad
from ..vocab import NON_SCENARIO_EXPERIMENTS, Vocabulary

DEFAULT_OUTPUT_LABEL = "output1"
REANALYSIS_DRIVERS = ("ECMWF-ERAINT", "ERAINT", "ECMWF-ERA5")


def resolve_driving_model(driving_model: str, known_models: Iterable[str] = ()) -> str:
    """Strip the institute prefix CORDEX puts on driving model names.

    ``MOHC-HadGEM2-ES`` becomes ``HadGEM2-ES`` when that model is known; the
    longest known suffix wins, otherwise the text after the first hyphen.
    """
    known = set(known_models)
    if driving_model in known:
        return driving_model
    matches = [m for m in known if driving_model.endswith("-" + m)]
    if matches:
        return max(matches, key=len)
    return driving_model.split("-", 1)[1] if "-" in driving_model else driving_model


def simulation_facets(drs: DrsComponents, known_models: Iterable[str] = ()) -> tuple[str, ...]:
    """The identity of the simulation a DRS id belongs to."""
    ens = str(drs.ensemble)
    if drs.project == "cordex" and drs.domain is not None:
        return ("cordex", drs.domain, resolve_driving_model(drs.driving_model or "", known_models),
                drs.model, drs.experiment, ens)
    return (drs.project, drs.model, drs.experiment, ens)


def dataset_suffix(drs: DrsComponents) -> str:
    if drs.project == "cordex":
        return f"{drs.frequency}.{drs.variable}"
    return f"{drs.frequency}.{drs.realm}.{drs.table}"


def map_drs(
    records: Iterable[DatasetRecord | DrsComponents],
    vocab: Vocabulary,
    graph: Iri,
    known_models: Iterable[str] = (),
    log: WarningLog | None = None,
) -> set[Quad]:
    log = WarningLog() if log is None else log
    known_models = set(known_models)
    v = vocab.iri
    mint = vocab.minter
    out: set[Quad] = set()

    def add(s, p, o):
        out.add(Quad(s, p, o, graph))

    warned: set[tuple[str, ...]] = set()
    for rec in records:
        drs = rec.drs if isinstance(rec, DatasetRecord) else rec
        facets = simulation_facets(drs, known_models)
        sim = mint.simulation(*facets)
        model = mint.model(drs.model)
        add(sim, RDF_TYPE, v("ccso:DynamicalDownscaling" if drs.project == "cordex" else "ccso:GlobalClimateSimulation"))
        add(sim, RDFS_LABEL, Literal(".".join(facets)))
        add(sim, v("ccso:isExecutionOf"), model)
        add(model, RDF_TYPE, v("ccso:RegionalClimateModel" if drs.project == "cordex" else "ccso:GlobalClimateModel"))
        add(model, RDFS_LABEL, Literal(drs.model))

        scenario = vocab.scenario_for(drs.experiment)
        if scenario is not None:
            scen_iri, scen_class, scen_label = scenario
            add(sim, v("ccso:refersToScenario"), scen_iri)
            add(scen_iri, RDF_TYPE, v(scen_class))
            add(scen_iri, RDFS_LABEL, Literal(scen_label))
        elif drs.experiment not in NON_SCENARIO_EXPERIMENTS and facets not in warned:
            warned.add(facets)
            log.warn(graph.value.rsplit("/", 1)[-1], ".".join(facets), f"experiment {drs.experiment} is not a known scenario")

        if drs.project == "cordex" and drs.driving_model and drs.driving_model not in REANALYSIS_DRIVERS:
            driver = resolve_driving_model(drs.driving_model, known_models)
            add(sim, v("ccso:isDownscalingOf"), mint.simulation("cmip5", driver, drs.experiment, str(drs.ensemble)))

        if not isinstance(rec, DatasetRecord):
            continue

        output = mint.output(sim, drs.product or DEFAULT_OUTPUT_LABEL)
        add(sim, v("ccso:hasOutput"), output)
        add(output, RDF_TYPE, v("data:Dataset"))
        add(output, RDFS_LABEL, Literal(f"{'.'.join(facets)} {drs.product or DEFAULT_OUTPUT_LABEL}"))

        dataset = mint.dataset(output, dataset_suffix(drs))
        add(output, v("top:hasPart"), dataset)
        add(dataset, RDF_TYPE, v("data:Dataset"))
        add(dataset, RDFS_LABEL, Literal(rec.dataset_id if drs.version is None else rec.dataset_id.rsplit(".", 1)[0]))
        for name in rec.variables:
            add(dataset, v("data:holdsSpecializationOfVariable"), mint.mip_variable(name))

        if rec.geodetic_resolution is not None:
            grid_name = rec.grid or f"{rec.geodetic_resolution}deg"
            _axis(add, vocab, dataset, "geodetic", grid_name, mint.grid(grid_name),
                  Literal(rec.geodetic_resolution, XSD + "decimal"))
        if rec.temporal_resolution is not None:
            dur = rec.temporal_resolution
            _axis(add, vocab, dataset, "time", dur, mint.time_grid(dur), Literal(dur, XSD + "duration"))
    return out


def _axis(add, vocab: Vocabulary, dataset: Iri, dimension: str, name: str, grid: Iri, resolution: Literal) -> None:
    v = vocab.iri
    dim = vocab.minter.dimension(dimension)
    axis = vocab.minter.axis_variable(dimension, name)
    add(dataset, v("data:dependsOnVariable"), axis)
    add(axis, RDF_TYPE, v("data:Variable"))
    add(axis, v("data:holdsSpecializationOfVariable"), dim)
    add(axis, v("data:hasDiscretization"), grid)
    add(grid, RDF_TYPE, v("data:RollingRegularGrid"))
    add(grid, v("data:hasResolutionValue"), resolution)
    add(dim, RDF_TYPE, v("data:Continuum"))
    add(dim, RDFS_LABEL, Literal(dimension))
