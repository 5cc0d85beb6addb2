import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccskg.rdf import (
    DEFAULT_GRAPH,
    RDF_TYPE,
    XSD,
    BlankNode,
    GraphStore,
    Iri,
    IsomorphismLimitError,
    Literal,
    Quad,
    RdfSyntaxError,
    TermError,
    isomorphic,
    parse,
    parse_nquads,
    parse_turtle,
    serialize,
    serialize_nquads,
    serialize_turtle,
)
from ccskg.rdf.namespace import compact_iri

G = Iri("http://example.org/g/1")
G2 = Iri("http://example.org/g/2")
EX = "http://example.org/"


def iri(local):
    return Iri(EX + local)


class TestTerms:
    def test_relative_iri_rejected(self):
        with pytest.raises(TermError):
            Iri("relative/path")

    def test_iri_with_space_rejected(self):
        with pytest.raises(TermError):
            Iri("http://example.org/a b")

    def test_language_forces_langstring(self):
        lit = Literal("hello", language="en")
        assert lit.datatype.endswith("#langString")
        assert lit.nt == '"hello"@en'

    def test_langstring_without_tag_rejected(self):
        with pytest.raises(TermError):
            Literal("x", "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString")

    def test_typed_literal_nt(self):
        assert Literal("0.11", XSD + "decimal").nt == '"0.11"^^<http://www.w3.org/2001/XMLSchema#decimal>'

    def test_literal_subject_rejected(self):
        with pytest.raises(TermError):
            Quad(Literal("x"), RDF_TYPE, iri("C"), G)

    def test_escaping(self):
        assert Literal('a"b\nc\\').nt == r'"a\"b\nc\\"'


class TestStore:
    def test_insert_ignores_duplicates(self):
        s = GraphStore()
        q = Quad(iri("a"), iri("p"), iri("b"), G)
        assert s.insert(q) == 1
        assert s.insert(q) == 1
        assert len(s) == 1

    def test_match_wildcards(self):
        s = GraphStore([
            Quad(iri("a"), iri("p"), iri("b"), G),
            Quad(iri("a"), iri("p"), iri("b"), G2),
            Quad(iri("a"), iri("q"), Literal("x"), G),
        ])
        assert len(s.match(subject=iri("a"))) == 3
        assert len(s.match(predicate=iri("p"))) == 2
        assert len(s.match(graph=G2)) == 1
        # the default graph is the union; triples dedupe across graphs
        assert s.triples(predicate=iri("p")) == {(iri("a"), iri("p"), iri("b"))}

    def test_graphs_sorted_and_stats(self):
        s = GraphStore([Quad(iri("a"), iri("p"), iri("b"), G2), Quad(iri("a"), iri("p"), iri("b"), G)])
        assert s.graphs() == [G, G2]
        assert s.stats() == {G: 1, G2: 1}

    def test_empty_store_stats(self):
        assert GraphStore().stats() == {}

    def test_equality_is_set_equality(self):
        a = GraphStore([Quad(iri("a"), iri("p"), iri("b"), G)])
        b = GraphStore([Quad(iri("a"), iri("p"), iri("b"), G)])
        assert a == b


class TestNQuads:
    def test_canonical_sort(self):
        s = GraphStore([Quad(iri("b"), iri("p"), iri("c"), G), Quad(iri("a"), iri("p"), iri("c"), G)])
        lines = serialize_nquads(s).decode().splitlines()
        assert lines == sorted(lines)

    def test_parse_error_has_position(self):
        with pytest.raises(RdfSyntaxError) as err:
            parse_nquads(b"<http://e/a> <http://e/p> <http://e/b> <http://e/g> .\n<http://e/a> <http://e/p> .\n")
        assert err.value.line == 2

    def test_triple_goes_to_default_graph(self):
        s = parse_nquads(b'<http://e/a> <http://e/p> "x" .\n')
        assert s.graphs() == [DEFAULT_GRAPH]

    def test_escapes_round_trip(self):
        s = GraphStore([Quad(iri("a"), iri("p"), Literal('tab\there "q" é \\ \n'), G)])
        assert parse_nquads(serialize_nquads(s)) == s


class TestTurtle:
    def test_prefixes_and_a(self):
        s = GraphStore([Quad(iri("a"), RDF_TYPE, iri("C"), G)])
        text = serialize_turtle(s, {"ex": EX}).decode()
        assert "ex:a a ex:C" in text

    def test_parse_abbreviations(self):
        doc = """@prefix ex: <http://example.org/> .
        ex:a a ex:C ; ex:p ex:b , ex:c ; ex:n 5 ; ex:d 0.11 ; ex:t true ; ex:l "hi"@en .
        """
        s = parse_turtle(doc)
        assert len(s) == 7
        assert (iri("a"), iri("n"), Literal("5", XSD + "integer")) in s.triples()
        assert (iri("a"), iri("d"), Literal("0.11", XSD + "decimal")) in s.triples()

    def test_unknown_prefix(self):
        with pytest.raises(RdfSyntaxError):
            parse_turtle("nope:a nope:b nope:c .")

    def test_graph_blocks_round_trip(self):
        s = GraphStore([Quad(iri("a"), iri("p"), iri("b"), G), Quad(iri("a"), iri("p"), Literal("x"), G2)])
        assert parse_turtle(serialize_turtle(s, {"ex": EX})) == s


class TestIsomorphism:
    def test_relabelled_blank_nodes(self):
        a = GraphStore([Quad(BlankNode("x"), iri("p"), BlankNode("y"), G), Quad(BlankNode("y"), iri("p"), iri("o"), G)])
        b = GraphStore([Quad(BlankNode("m"), iri("p"), BlankNode("n"), G), Quad(BlankNode("n"), iri("p"), iri("o"), G)])
        assert isomorphic(a, b)

    def test_non_isomorphic(self):
        a = GraphStore([Quad(BlankNode("x"), iri("p"), BlankNode("y"), G)])
        b = GraphStore([Quad(BlankNode("x"), iri("p"), BlankNode("x"), G)])
        assert not isomorphic(a, b)

    def test_limit(self):
        big = GraphStore([Quad(BlankNode(f"b{i}"), iri("p"), iri("o"), G) for i in range(25)])
        with pytest.raises(IsomorphismLimitError, match="undecidable at this size"):
            isomorphic(big, big)


_names = st.sampled_from(["a", "b", "c", "d"])
_objects = st.one_of(
    _names.map(iri),
    st.text(max_size=8).map(Literal),
    st.integers(-5, 5).map(lambda n: Literal(str(n), XSD + "integer")),
    st.sampled_from(["en", "de-AT"]).map(lambda tag: Literal("word", language=tag)),
    st.sampled_from(["x", "y"]).map(BlankNode),
)
_quads = st.builds(
    Quad,
    st.one_of(_names.map(iri), st.sampled_from(["x", "y"]).map(BlankNode)),
    _names.map(lambda n: iri("p" + n)),
    _objects,
    st.sampled_from([G, G2]),
)


@settings(max_examples=80, deadline=None)
@given(st.lists(_quads, max_size=20))
def test_round_trip_property(quads):
    store = GraphStore(quads)
    for fmt in ("nquads", "turtle"):
        back = parse(serialize(store, fmt, {"ex": EX}), fmt)
        assert isomorphic(store, back)


def test_compact_iri_longest_namespace():
    prefixes = {"ex": EX, "exg": EX + "g/"}
    assert compact_iri(EX + "g/1", prefixes) == "exg:1"
    assert compact_iri("http://other/x", prefixes) is None
