"""Read-only HTTP service: SPARQL endpoint plus linked-data dereferencing.

``LinkedDataApp.handle`` is a plain function of the request so it can be
tested without sockets; ``serve`` wraps it in a threading HTTP server.
"""
from __future__ import annotations

import html
import logging
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from .query import MEDIA_TYPE as SPARQL_JSON
from .query import QuerySyntaxError, evaluate, parse_query, to_json
from .rdf.namespace import compact_iri
from .rdf.nquads import serialize_ntriples
from .rdf.store import GraphStore
from .rdf.terms import Iri, Literal, Term
from .rdf.turtle import serialize_turtle_triples

logger = logging.getLogger(__name__)

TURTLE = "text/turtle"
NTRIPLES = "application/n-triples"
HTML = "text/html"
# server preference order, used to break q-value ties
OFFERED = (TURTLE, NTRIPLES, HTML)


@dataclass
class Response:
    status: int
    content_type: str
    body: bytes
    headers: dict[str, str] = field(default_factory=dict)

    @property
    def text(self) -> str:
        return self.body.decode("utf-8")


def _plain(status: int, message: str) -> Response:
    return Response(status, "text/plain; charset=utf-8", (message.rstrip("\n") + "\n").encode("utf-8"))


def parse_accept(header: str) -> list[tuple[str, float]]:
    ranges = []
    for part in header.split(","):
        fields = [f.strip() for f in part.split(";")]
        media = fields[0].lower()
        if not media or "/" not in media:
            continue
        q = 1.0
        for param in fields[1:]:
            name, _, value = param.partition("=")
            if name.strip().lower() == "q":
                try:
                    q = max(0.0, min(1.0, float(value)))
                except ValueError:
                    q = 0.0
        ranges.append((media, q))
    return ranges


def _specificity(media_range: str, offered: str) -> int:
    """2 exact, 1 ``type/*``, 0 ``*/*``, -1 no match."""
    if media_range == offered:
        return 2
    major, _, minor = media_range.partition("/")
    if minor == "*" and major == offered.split("/")[0]:
        return 1
    if media_range == "*/*":
        return 0
    return -1


def negotiate(accept: str | None, offered: tuple[str, ...] = OFFERED) -> str | None:
    """Highest-q offered type; None means nothing acceptable.

    Each offered type takes the q of the most specific range that matches it.
    Ties go to the more specific match, then to server order.
    """
    if accept is None or not accept.strip():
        return offered[0]
    ranges = parse_accept(accept)
    best: tuple[float, int, int] | None = None
    chosen = None
    for rank, media in enumerate(offered):
        matches = [(_specificity(r, media), q) for r, q in ranges if _specificity(r, media) >= 0]
        if not matches:
            continue
        spec, q = max(matches)
        if q <= 0:
            continue
        key = (q, spec, -rank)
        if best is None or key > best:
            best, chosen = key, media
    return chosen


class LinkedDataApp:
    def __init__(self, store: GraphStore, base_iri: str, prefixes: dict[str, str] | None = None) -> None:
        self.base_iri = base_iri if base_iri.endswith("/") else base_iri + "/"
        self.prefixes = dict(prefixes or store.prefixes or {})
        self._store = store.snapshot()
        self._swap_lock = threading.Lock()

    @property
    def store(self) -> GraphStore:
        return self._store

    def swap(self, store: GraphStore) -> None:
        """Atomically replace the served snapshot; in-flight requests keep the old one."""
        snap = store.snapshot()
        with self._swap_lock:
            self._store = snap

    def handle(self, method: str, path: str, query_string: str = "", headers: dict[str, str] | None = None,
               body: bytes = b"") -> Response:
        headers = {k.lower(): v for k, v in (headers or {}).items()}
        store = self._store  # one snapshot for the whole request
        if path == "/sparql":
            return self.handle_sparql(store, method, query_string, headers, body)
        if path.startswith("/data/") or path.startswith("/onto/"):
            if method not in ("GET", "HEAD"):
                return Response(405, "text/plain; charset=utf-8", b"method not allowed\n", {"Allow": "GET, HEAD"})
            return self.handle_dereference(store, path, headers.get("accept"))
        return _plain(404, f"no resource at {path}")

    def handle_sparql(self, store: GraphStore, method: str, query_string: str, headers: dict[str, str],
                      body: bytes) -> Response:
        if method == "GET":
            values = parse_qs(query_string, keep_blank_values=True).get("query")
        elif method == "POST":
            ctype = headers.get("content-type", "").split(";")[0].strip().lower()
            if ctype == "application/sparql-query":
                values = [body.decode("utf-8", errors="replace")]
            elif ctype == "application/x-www-form-urlencoded":
                values = parse_qs(body.decode("utf-8", errors="replace"), keep_blank_values=True).get("query")
            else:
                return _plain(415, f"unsupported content type {ctype or '(none)'}")
        else:
            return Response(405, "text/plain; charset=utf-8", b"method not allowed\n", {"Allow": "GET, POST"})
        if not values or not values[0].strip():
            return _plain(400, "missing query parameter")
        try:
            query = parse_query(values[0], self.prefixes)
        except QuerySyntaxError as exc:
            return _plain(400, f"query syntax error: {exc}")
        if query.form != "SELECT":
            return _plain(400, "only SELECT queries are accepted; updates are not served")
        return Response(200, SPARQL_JSON, to_json(evaluate(store, query)))

    def describe(self, store: GraphStore, iri: Iri) -> set[tuple[Term, Term, Term]]:
        return store.triples(subject=iri) | store.triples(obj=iri)

    def handle_dereference(self, store: GraphStore, path: str, accept: str | None) -> Response:
        try:
            iri = Iri(self.base_iri + path.lstrip("/"))
        except ValueError:
            return _plain(404, f"no resource at {path}")
        triples = self.describe(store, iri)
        if not triples:
            return _plain(404, f"{iri.value} is not described here")
        media = negotiate(accept)
        if media is None:
            return _plain(406, "acceptable types: " + ", ".join(OFFERED))
        vary = {"Vary": "Accept"}
        if media == TURTLE:
            return Response(200, "text/turtle; charset=utf-8", serialize_turtle_triples(triples, self.prefixes), vary)
        if media == NTRIPLES:
            return Response(200, NTRIPLES, serialize_ntriples(triples), vary)
        return Response(200, "text/html; charset=utf-8", self.render_html(iri, triples), vary)

    def _label(self, term: Term) -> str:
        if isinstance(term, Iri):
            text = compact_iri(term.value, self.prefixes) or term.value
            href = term.value
            if href.startswith(self.base_iri):
                href = "/" + href[len(self.base_iri):]
            return f'<a href="{html.escape(href)}">{html.escape(text)}</a>'
        if isinstance(term, Literal):
            suffix = f"@{term.language}" if term.language else ""
            dt = "" if term.language or term.datatype.endswith("#string") else (
                " (" + (compact_iri(term.datatype, self.prefixes) or term.datatype) + ")")
            return html.escape(f'"{term.lexical}"{suffix}{dt}')
        return html.escape(term.nt)

    def render_html(self, iri: Iri, triples) -> bytes:
        title = compact_iri(iri.value, self.prefixes) or iri.value
        rows = sorted(triples, key=lambda t: (t[0] != iri, t[1].nt, t[0].nt, t[2].nt))
        body = "\n".join(
            f"<tr><td>{self._label(s)}</td><td>{self._label(p)}</td><td>{self._label(o)}</td></tr>" for s, p, o in rows
        )
        page = (
            "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
            f"<title>{html.escape(title)}</title></head>\n<body>\n<h1>{html.escape(title)}</h1>\n"
            f"<p>{html.escape(iri.value)}</p>\n"
            "<table>\n<tr><th>term</th><th>property</th><th>value</th></tr>\n"
            f"{body}\n</table>\n</body></html>\n"
        )
        return page.encode("utf-8")


def make_handler(app: LinkedDataApp) -> type[BaseHTTPRequestHandler]:
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _run(self, method: str) -> None:
            parts = urlsplit(self.path)
            length = int(self.headers.get("Content-Length") or 0)
            body = self.rfile.read(length) if length else b""
            resp = app.handle(method, parts.path, parts.query, dict(self.headers.items()), body)
            self.send_response(resp.status)
            self.send_header("Content-Type", resp.content_type)
            self.send_header("Content-Length", str(len(resp.body)))
            for k, v in resp.headers.items():
                self.send_header(k, v)
            self.end_headers()
            if method != "HEAD":
                self.wfile.write(resp.body)

        def do_GET(self) -> None:
            self._run("GET")

        def do_HEAD(self) -> None:
            self._run("HEAD")

        def do_POST(self) -> None:
            self._run("POST")

        def do_PUT(self) -> None:
            self._run("PUT")

        def do_DELETE(self) -> None:
            self._run("DELETE")

        def log_message(self, fmt: str, *args) -> None:
            logger.info("%s %s", self.address_string(), fmt % args)

    return Handler


def make_server(app: LinkedDataApp, host: str = "127.0.0.1", port: int = 8000) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), make_handler(app))
    server.daemon_threads = True
    return server
