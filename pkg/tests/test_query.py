import json

import pytest

from ccskg.query import (
    QuerySyntaxError,
    evaluate,
    evaluate_insert,
    parse_query,
    parse_update,
    to_json_obj,
    to_table,
)
from ccskg.query.ast import Inverse, OneOrMore, Sequence, ZeroOrMore
from ccskg.query.values import EvaluationError, compare, order_key
from ccskg.rdf import GraphStore, Iri, Literal, Quad, parse_turtle
from ccskg.rdf.terms import BlankNode

XSD = "http://www.w3.org/2001/XMLSchema#"
EX = "http://example.org/"
G = Iri(EX + "g")

SIMULATIONS_QUERY = """
SELECT ?model ?simulation ?output ?geodeticResolution
WHERE {
    ?simulation a ccso:Simulation ;
        ccso:refersToScenario rcp:RCP4.5 ;
        ccso:hasOutput ?output .
    ?output data:holdsSpecializationOfVariable* mip:tas ;
    data:dependsOnVariable ?geodeticVariable .
    ?geodeticVariable
        data:holdsSpecializationOfVariable* dim:geodetic ;
        data:hasDiscretization ?geodeticDiscretization .
    ?geodeticDiscretization a data:RollingRegularGrid ;
    \tdata:hasResolutionValue ?geodeticResolution .
\tFILTER(?geodeticResolution < 0.2)
}
ORDER BY ?model ?simulation ?output
"""


def store_from(ttl: str) -> GraphStore:
    return parse_turtle("@prefix : <http://example.org/> .\n" + ttl)


def run(store, text):
    return evaluate(store, parse_query("PREFIX : <http://example.org/>\n" + text))


class TestParser:
    def test_published_simulation_query(self, vocab):
        q = parse_query(SIMULATIONS_QUERY, vocab.prefixes)
        assert q.form == "SELECT"
        assert q.result_variables() == ["model", "simulation", "output", "geodeticResolution"]
        assert len(q.where) == 9 and len(q.filters) == 1
        assert [k.var.name for k in q.order] == ["model", "simulation", "output"]
        assert q.where[3].path == ZeroOrMore(vocab.expand("data:holdsSpecializationOfVariable"))
        # the published text projects ?model without binding it
        assert q.warnings == ["unbounded projection: ?model does not occur in WHERE"]

    def test_published_dataset_query(self, vocab, data_dir):
        q = parse_query((data_dir / "queries/cq2_filter_datasets.rq").read_text(), vocab.prefixes)
        assert q.where[0].subject == vocab.expand("sim:cmip5.HadCM3.rcp45.r10i1p1")
        assert q.where[0].path == Sequence((vocab.expand("ccso:hasOutput"), ZeroOrMore(vocab.expand("top:hasPart"))))
        assert q.where[-1].object == Literal("P1M", XSD + "duration")
        assert not q.warnings

    @pytest.mark.parametrize("text", [
        "SELECT",
        "SELECT ?x WHERE { ?x ?p }",
        "SELECT ?x WHERE { ?x nosuch:p ?y }",
        "SELECT ?x WHERE { ?x :p ?y } LIMIT -1",
        "SELECT ?x WHERE { OPTIONAL { ?x :p ?y } }",
        "SELECT ?x WHERE { ?x :p|:q ?y }",
        "SELECT ?x WHERE { ?x :p ?y . FILTER(?y < ) }",
    ])
    def test_rejects(self, text):
        with pytest.raises(QuerySyntaxError):
            parse_query("PREFIX : <http://example.org/>\n" + text)

    def test_error_position(self):
        with pytest.raises(QuerySyntaxError) as info:
            parse_query("SELECT ?x\nWHERE { ?x <p> }")
        assert info.value.line == 2 and info.value.column > 1

    def test_paths(self):
        q = parse_query("PREFIX : <http://example.org/>\nSELECT * WHERE { ?a ^:p/:q+ ?b }")
        p, qq = Iri(EX + "p"), Iri(EX + "q")
        assert q.where[0].path == Sequence((Inverse(p), OneOrMore(qq)))

    def test_update_operations(self):
        ops = parse_update("PREFIX : <http://example.org/>\nINSERT { ?a :r ?b } WHERE { ?a :p ?b } ;\n"
                           "INSERT { ?b :r ?a } WHERE { ?a :q ?b }")
        assert [op.form for op in ops] == ["INSERT", "INSERT"]


class TestValues:
    def test_decimal_less_than_double(self):
        assert compare("<", Literal("0.11", XSD + "decimal"), Literal("0.2", XSD + "double"))
        assert not compare("<", Literal("0.44", XSD + "decimal"), Literal("0.2", XSD + "decimal"))

    def test_numeric_equality_across_types(self):
        assert compare("=", Literal("1", XSD + "integer"), Literal("1.0", XSD + "decimal"))

    def test_durations(self):
        d = lambda s, t="duration": Literal(s, XSD + t)  # noqa: E731
        assert compare("=", d("P1M"), d("P1M"))
        assert compare("<", d("P1M"), d("P1Y"))
        assert compare("<", d("PT1H"), d("P1D"))
        assert not compare("=", d("P1M"), d("P30D"))
        with pytest.raises(EvaluationError):
            compare("<", d("P1M"), d("P30D"))

    def test_iri_ordering_is_an_error(self):
        with pytest.raises(EvaluationError):
            compare("<", Iri(EX + "a"), Iri(EX + "b"))
        assert compare("!=", Iri(EX + "a"), Iri(EX + "b"))

    def test_incomparable_types(self):
        with pytest.raises(EvaluationError):
            compare("<", Literal("a"), Literal("1", XSD + "integer"))

    def test_order_key_classes(self):
        terms = [Literal("b"), Literal("2", XSD + "integer"), Iri(EX + "x"), BlankNode("b0"), None]
        ranked = sorted(terms, key=order_key)
        assert ranked == [None, BlankNode("b0"), Iri(EX + "x"), Literal("2", XSD + "integer"), Literal("b")]


class TestEvaluate:
    def test_reflexive_closure_for_absent_node(self):
        store = store_from(":a :p :b .")
        res = run(store, "SELECT ?x WHERE { :zzz :p* ?x }")
        assert res.tuples() == [(Iri(EX + "zzz"),)]
        assert len(run(store, "SELECT * WHERE { :zzz :p+ ?x }")) == 0

    def test_closure_cycle_terminates(self):
        store = store_from(":a :p :b . :b :p :c . :c :p :a .")
        res = run(store, "SELECT ?x WHERE { :a :p+ ?x } ORDER BY ?x")
        assert [r["x"].value for r in res] == [EX + "a", EX + "b", EX + "c"]

    def test_sequence_is_a_bag(self):
        store = store_from(":a :p :m1 , :m2 . :m1 :q :z . :m2 :q :z .")
        assert len(run(store, "SELECT ?z WHERE { :a :p/:q ?z }")) == 2
        assert len(run(store, "SELECT DISTINCT ?z WHERE { :a :p/:q ?z }")) == 1

    def test_inverse(self):
        store = store_from(":a :p :b .")
        assert run(store, "SELECT ?x WHERE { :b ^:p ?x }").tuples() == [(Iri(EX + "a"),)]

    def test_order_by_is_a_permutation(self):
        store = store_from(":a :v 3 . :b :v 1 . :c :v 2 . :d :v \"x\" .")
        plain = run(store, "SELECT ?s ?v WHERE { ?s :v ?v }")
        ordered = run(store, "SELECT ?s ?v WHERE { ?s :v ?v } ORDER BY DESC(?v)")
        assert sorted(map(str, plain.tuples())) == sorted(map(str, ordered.tuples()))
        assert [r["v"].lexical for r in ordered] == ["x", "3", "2", "1"]

    def test_limit_and_filter(self):
        store = store_from(":a :v 3 . :b :v 1 . :c :v 2 .")
        res = run(store, "SELECT ?s WHERE { ?s :v ?v . FILTER(?v >= 2) } ORDER BY ?v LIMIT 1")
        assert res.tuples() == [(Iri(EX + "c"),)]

    def test_filter_error_drops_solution(self):
        store = store_from(':a :v "text" . :b :v 1 .')
        assert run(store, "SELECT ?s WHERE { ?s :v ?v . FILTER(?v < 5) }").tuples() == [(Iri(EX + "b"),)]

    def test_variable_predicate(self):
        store = store_from(":a :p :b ; :q :c .")
        assert len(run(store, "SELECT ?p WHERE { :a ?p ?o }")) == 2

    def test_default_graph_is_union(self):
        store = GraphStore([Quad(Iri(EX + "a"), Iri(EX + "p"), Iri(EX + "b"), Iri(EX + "g1")),
                            Quad(Iri(EX + "a"), Iri(EX + "p"), Iri(EX + "b"), Iri(EX + "g2"))])
        assert len(run(store, "SELECT ?o WHERE { :a :p ?o }")) == 1

    def test_json_shape(self):
        store = store_from(':a :label "x"@en ; :n 5 ; :s "plain" .')
        res = run(store, "SELECT ?p ?o WHERE { :a ?p ?o } ORDER BY ?o")
        obj = json.loads(json.dumps(to_json_obj(res)))
        assert obj["head"]["vars"] == ["p", "o"]
        values = [b["o"] for b in obj["results"]["bindings"]]
        assert {"type": "literal", "value": "5", "datatype": XSD + "integer"} in values
        assert {"type": "literal", "value": "x", "xml:lang": "en"} in values
        assert {"type": "literal", "value": "plain"} in values
        assert obj["results"]["bindings"][0]["p"]["type"] == "uri"

    def test_table(self):
        res = run(store_from(":a :p :b ."), "SELECT ?o WHERE { :a :p ?o }")
        assert to_table(res, {"ex": EX}) == "?o\nex:b\n"


class TestInsert:
    def test_insert_where(self):
        store = store_from(":a :p :b . :b :p :c .")
        (op,) = parse_update("PREFIX : <http://example.org/>\nINSERT { ?x :r ?y } WHERE { ?x :p+ ?y }")
        assert evaluate_insert(store, op, G) == 3
        assert evaluate_insert(store, op, G) == 0
        assert len(store.match(None, Iri(EX + "r"), None, G)) == 3

    def test_unbound_template_variable_warns(self):
        from ccskg.ingest import WarningLog
        (op,) = parse_update("PREFIX : <http://example.org/>\nINSERT { ?x :r ?nope } WHERE { ?x :p ?y }")
        assert op.warnings
        log = WarningLog()
        assert evaluate_insert(store_from(":a :p :b ."), op, G, log) == 0
        assert len(log) == 1

    def test_literal_subject_skipped(self):
        from ccskg.ingest import WarningLog
        (op,) = parse_update("PREFIX : <http://example.org/>\nINSERT { ?y :r ?x } WHERE { ?x :p ?y }")
        log = WarningLog()
        assert evaluate_insert(store_from(':a :p "lit" . :b :p :c .'), op, G, log) == 1
        assert len(log) == 1
