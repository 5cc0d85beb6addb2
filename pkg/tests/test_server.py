import json
import threading
import urllib.error
import urllib.parse
import urllib.request

import pytest

from ccskg.rdf import GraphStore, Iri, Quad, parse_nquads, parse_turtle
from ccskg.server import LinkedDataApp, make_server, negotiate

SIM_PATH = "/data/cs/simulation/cmip5.HadCM3.rcp45.r10i1p1"


@pytest.fixture(scope="module")
def app(fixture_build):
    return LinkedDataApp(fixture_build.store, fixture_build.vocab.base_iri, fixture_build.vocab.output_prefixes)


@pytest.mark.parametrize("accept,expected", [
    (None, "text/turtle"),
    ("", "text/turtle"),
    ("*/*", "text/turtle"),
    ("text/html", "text/html"),
    ("text/html;q=0.9, text/turtle;q=0.5", "text/html"),
    ("application/n-triples", "application/n-triples"),
    ("text/*", "text/turtle"),
    ("text/*;q=0.5, text/html", "text/html"),
    ("*/*;q=0.1, application/n-triples;q=0.2", "application/n-triples"),
    ("text/turtle;q=0, */*", "application/n-triples"),
    ("application/json", None),
    ("image/png, text/turtle;q=0", None),
])
def test_negotiate(accept, expected):
    assert negotiate(accept) == expected


def test_turtle_description_round_trips(app):
    resp = app.handle("GET", SIM_PATH, headers={"Accept": "text/turtle"})
    assert resp.status == 200 and resp.content_type.startswith("text/turtle")
    assert resp.headers["Vary"] == "Accept"
    iri = Iri(app.base_iri + SIM_PATH.lstrip("/"))
    got = {q.triple for q in parse_turtle(resp.body)}
    assert got == app.describe(app.store, iri)
    assert any(t[2] == iri for t in got) and any(t[0] == iri for t in got)


def test_ntriples(app):
    resp = app.handle("GET", SIM_PATH, headers={"Accept": "application/n-triples"})
    assert resp.content_type == "application/n-triples"
    assert len(parse_nquads(resp.body)) == len(app.describe(app.store, Iri(app.base_iri + SIM_PATH[1:])))


def test_html(app):
    resp = app.handle("GET", SIM_PATH, headers={"Accept": "text/html"})
    assert resp.content_type.startswith("text/html")
    assert "<table>" in resp.text and "ccso:GlobalClimateSimulation" in resp.text


def test_ontology_term(app):
    assert app.handle("GET", "/onto/ccso/Simulation").status == 200


def test_errors(app):
    assert app.handle("GET", "/data/nothing-here").status == 404
    assert app.handle("GET", "/elsewhere").status == 404
    assert app.handle("GET", SIM_PATH, headers={"Accept": "image/png"}).status == 406
    assert app.handle("DELETE", SIM_PATH).status == 405


def test_sparql_get_and_post(app):
    q = "SELECT ?s WHERE { ?s a ccso:DynamicalDownscaling } ORDER BY ?s"
    get = app.handle("GET", "/sparql", urllib.parse.urlencode({"query": q}))
    assert get.status == 200 and get.content_type == "application/sparql-results+json"
    rows = json.loads(get.body)["results"]["bindings"]
    assert len(rows) == 3
    post = app.handle("POST", "/sparql", headers={"Content-Type": "application/sparql-query"}, body=q.encode())
    assert post.body == get.body
    form = app.handle("POST", "/sparql", headers={"Content-Type": "application/x-www-form-urlencoded"},
                      body=urllib.parse.urlencode({"query": q}).encode())
    assert form.body == get.body


def test_sparql_errors(app):
    assert app.handle("GET", "/sparql").status == 400
    assert app.handle("GET", "/sparql", "query=SELECT").status == 400
    upd = urllib.parse.urlencode({"query": "INSERT { ?s a ?s } WHERE { ?s ?p ?o }"})
    assert app.handle("GET", "/sparql", upd).status == 400
    assert app.handle("POST", "/sparql", headers={"Content-Type": "text/plain"}, body=b"x").status == 415
    assert app.handle("PUT", "/sparql").status == 405


def test_swap_is_atomic(fixture_build):
    app = LinkedDataApp(fixture_build.store, fixture_build.vocab.base_iri)
    before = app.store
    g = Iri("http://localhost:8000/graph/x")
    app.swap(GraphStore([Quad(Iri("http://localhost:8000/data/a"), Iri("http://localhost:8000/data/p"),
                              Iri("http://localhost:8000/data/b"), g)]))
    assert app.store is not before and len(before) == len(fixture_build.store)
    assert app.handle("GET", "/data/a").status == 200


def test_over_socket(app):
    server = make_server(app, "127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        base = f"http://127.0.0.1:{server.server_port}"
        req = urllib.request.Request(base + SIM_PATH, headers={"Accept": "text/html"})
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 200 and resp.headers["Content-Type"].startswith("text/html")
        with pytest.raises(urllib.error.HTTPError) as info:
            urllib.request.urlopen(base + "/data/missing")
        assert info.value.code == 404
        query = urllib.parse.urlencode({"query": "SELECT * WHERE { ?s a ccso:Institution }"})
        with urllib.request.urlopen(f"{base}/sparql?{query}") as resp:
            assert len(json.load(resp)["results"]["bindings"]) == 2
    finally:
        server.shutdown()
        server.server_close()
