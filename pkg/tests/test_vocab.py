import pytest

from ccskg.rdf import RDF_TYPE, RDFS_SUBCLASSOF, GraphStore, Iri, parse_turtle
from ccskg.vocab import REGISTRY, VocabError, Vocabulary


def test_expand_mip_tas(vocab):
    assert vocab.expand("mip:tas") == Iri("http://localhost:8000/data/cs/variable/mip/tas")


def test_expand_unknown_prefix(vocab):
    with pytest.raises(VocabError):
        vocab.expand("nosuch:x")


def test_compact_round_trips_every_registry_term(vocab):
    for curie, *_ in REGISTRY:
        assert vocab.compact(vocab.expand(curie)) == curie


def test_compact_outside_namespaces_is_none(vocab):
    assert vocab.compact("http://elsewhere.example/x") is None


def test_dimension_alias_expands_like_dim(vocab):
    assert vocab.expand("dimension:time") == vocab.expand("dim:time")
    assert vocab.compact(vocab.expand("dimension:time")) == "dim:time"


def test_unregistered_ontology_curie_rejected(vocab):
    with pytest.raises(VocabError):
        vocab.iri("ccso:NoSuchClass")


def test_empty_registry_emits_nothing():
    assert Vocabulary(registry=[]).emit_ontology_graph() == set()


def test_ontology_graph_shape(vocab):
    quads = vocab.emit_ontology_graph()
    with_super = sum(1 for t in vocab.terms.values() if t.parent)
    assert len(quads) == 2 * len(vocab.terms) + with_super
    assert {q.graph for q in quads} == {vocab.ontology_graph}
    store = GraphStore(quads)
    dd = vocab.expand("ccso:DynamicalDownscaling")
    assert store.match(dd, RDFS_SUBCLASSOF, vocab.expand("ccso:ClimateModelSimulation"))
    assert store.match(dd, RDF_TYPE, Iri("http://www.w3.org/2002/07/owl#Class"))


def test_model_chain(vocab):
    assert vocab.superclasses("ccso:GlobalClimateModel") == ["ccso:ClimateModel", "ccso:Model"]


def test_cycle_rejected():
    registry = [("ccso:A", "class", "a", "ccso:B"), ("ccso:B", "class", "b", "ccso:A")]
    with pytest.raises(VocabError, match="cycle"):
        Vocabulary(registry=registry)


def test_unknown_parent_rejected():
    with pytest.raises(VocabError):
        Vocabulary(registry=[("ccso:A", "class", "a", "ccso:Missing")])


def test_scenarios(vocab):
    iri, cls, label = vocab.scenario_for("rcp45")
    assert iri == vocab.expand("rcp:RCP4.5") and cls == "ccso:RCP" and label == "RCP4.5"
    assert vocab.scenario_for("historical") is None


def test_base_iri_override():
    v = Vocabulary("https://kg.example.org/")
    assert v.expand("mip:tas").value == "https://kg.example.org/data/cs/variable/mip/tas"


def test_export_turtle_parses(vocab):
    store = parse_turtle(vocab.export_turtle())
    assert len(store) == len(vocab.emit_ontology_graph())


def test_minted_iris_are_injective(vocab):
    m = vocab.minter
    assert m.simulation("a.b", "c") != m.simulation("a", "b.c")
    assert m.mip_variable("x y") == Iri(vocab.prefixes["mip"] + "x%20y")


def test_lint_flags_unregistered_terms(vocab):
    assert vocab.unknown_terms([vocab.expand("ccso:Bogus"), vocab.expand("mip:tas")]) == [
        vocab.prefixes["ccso"] + "Bogus"
    ]
