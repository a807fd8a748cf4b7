"""HTTP layer over the wiki engine.

Routes (bodies are JSON unless noted; see API.md for field names):

    GET  /pages/{ns}/{title}            page view with factbox
    PUT  /pages/{ns}/{title}            save wikitext, returns SaveResult
    GET  /pages/{ns}/{title}/history    revision metadata, newest first
    GET|POST /sparql                    read-only query endpoint
    GET  /facets?class=<iri>            instance list + value histograms
    GET  /export?graph=<iri-or-alias>   canonical N-Triples

The /sparql endpoint serializes SELECT results in the standard JSON
results format and CONSTRUCT/DESCRIBE as N-Triples; update forms are
rejected with 403 and never touch the store.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .annotations import PageRef
from .errors import (PageNotFoundError, ParseError,
                     PropertyKindConflictError, SemWikiError,
                     UnregisteredGraphError, UpdateNotAllowedError)
from .results import solutions_to_json, term_to_json
from .rio import serialize_ntriples, term_to_ntriples
from .terms import Iri
from .wiki import WikiEngine

NTRIPLES = "application/n-triples"
SPARQL_JSON = "application/sparql-results+json"


def _error(status: int, exc: Exception) -> JSONResponse:
    return JSONResponse({"error": str(exc), "kind": type(exc).__name__},
                        status_code=status)


def _page_ref(ns: str, title: str) -> PageRef:
    return PageRef(ns, title)


def _save_result_json(result) -> dict:
    return {
        "revision": result.revision_id,
        "quads_added": result.quads_added,
        "quads_removed": result.quads_removed,
        "fixpoint": {
            "rounds": result.fixpoint.rounds,
            "total_added": result.fixpoint.total_added,
            "added_per_rule": {k: v for k, v in
                               result.fixpoint.added_per_rule.items() if v},
        },
        "diagnostics": [{"message": d.message, "span": list(d.span)}
                        for d in result.diagnostics],
    }


def _page_json(view: dict) -> dict:
    page = view["page"]
    return {
        "namespace": page.namespace,
        "title": page.title,
        "display_text": view["display_text"],
        "wikitext": view["wikitext"],
        "factbox": [{"property": row["property"],
                     "value": term_to_json(row["value"]),
                     "inferred": row["inferred"]}
                    for row in view["factbox"]],
        "revision": view["revision"],
    }


def create_app(engine: WikiEngine, ui_dist: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="semwiki", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(SemWikiError)
    async def semwiki_error(request, exc):
        if isinstance(exc, PageNotFoundError):
            return _error(404, exc)
        if isinstance(exc, UpdateNotAllowedError):
            return _error(403, exc)
        if isinstance(exc, PropertyKindConflictError):
            return _error(409, exc)
        if isinstance(exc, (ParseError, UnregisteredGraphError)):
            return _error(400, exc)
        return _error(500, exc)

    @app.get("/pages/{ns}/{title}")
    def get_page(ns: str, title: str):
        return _page_json(engine.get_page(_page_ref(ns, title)))

    @app.put("/pages/{ns}/{title}")
    async def put_page(ns: str, title: str, request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            body = await request.json()
            if not isinstance(body, dict) or "wikitext" not in body:
                return _error(400, ValueError("body must carry 'wikitext'"))
            wikitext = body["wikitext"]
            author = body.get("author", "anonymous")
        else:
            wikitext = (await request.body()).decode("utf-8")
            author = request.query_params.get("author", "anonymous")
        if not isinstance(wikitext, str):
            return _error(400, ValueError("'wikitext' must be a string"))
        result = engine.save_page(_page_ref(ns, title), wikitext, author)
        return _save_result_json(result)

    @app.get("/pages/{ns}/{title}/history")
    def history(ns: str, title: str):
        return {"revisions": engine.history(_page_ref(ns, title))}

    async def _run_sparql(query: str) -> Response:
        form, result = engine.sparql(query, allow_update=False)
        if form == "select":
            return Response(solutions_to_json(result), media_type=SPARQL_JSON)
        return Response(serialize_ntriples(result), media_type=NTRIPLES)

    @app.get("/sparql")
    async def sparql_get(request: Request):
        query = request.query_params.get("query")
        if not query:
            return _error(400, ValueError("missing 'query' parameter"))
        return await _run_sparql(query)

    @app.post("/sparql")
    async def sparql_post(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/x-www-form-urlencoded"):
            form = await request.form()
            query = form.get("query")
        elif content_type.startswith("application/sparql-query"):
            query = (await request.body()).decode("utf-8")
        else:
            query = request.query_params.get("query")
            if query is None:
                query = (await request.body()).decode("utf-8")
        if not query:
            return _error(400, ValueError("missing query"))
        return await _run_sparql(query)

    @app.get("/facets")
    def facets(request: Request):
        class_iri = request.query_params.get("class")
        if not class_iri:
            return _error(400, ValueError("missing 'class' parameter"))
        selections = []
        for raw in request.query_params.getlist("filter"):
            prop, _, value_nt = raw.partition(" ")
            if not value_nt:
                return _error(400, ValueError(
                    "filter must be '<property-iri> <value>'"))
            selections.append((prop, _term_from_nt(value_nt)))
        data = engine.facet_data(Iri(class_iri), selections)
        return {
            "class": class_iri,
            "instances": [term_to_json(i) for i in data["instances"]],
            "facets": [{"property": f["property"],
                        "values": [{"value": term_to_json(v["value"]),
                                    "count": v["count"]}
                                   for v in f["values"]]}
                       for f in data["facets"]],
        }

    @app.get("/export")
    def export(request: Request):
        name = request.query_params.get("graph")
        if not name:
            return _error(400, ValueError("missing 'graph' parameter"))
        graph = engine.resolve_graph(name)
        return Response(engine.export_graph(graph), media_type=NTRIPLES)

    dist = Path(ui_dist) if ui_dist else None
    if dist and dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(dist), html=True), name="ui")

    return app


def _term_from_nt(text: str):
    """One term in N-Triples syntax (used by facet filters)."""
    from .rio import _Lexer, BLANK_LABEL, IRIREF, LANGTAG, PUNCT, STRING
    from .terms import Blank, Literal

    lexer = _Lexer(text.strip())
    kind, val, _, _ = lexer.next()
    if kind == IRIREF:
        return Iri(val)
    if kind == BLANK_LABEL:
        return Blank(val)
    if kind == STRING:
        nkind, nval, _, _ = lexer.next()
        if nkind == LANGTAG:
            return Literal(val, lang=nval)
        if nkind == PUNCT and nval == "^^":
            dkind, dval, _, _ = lexer.next()
            if dkind == IRIREF:
                return Literal(val, datatype=dval)
            raise ParseError("expected datatype IRI")
        return Literal(val)
    raise ParseError(f"cannot parse term {text!r}")


def run_server(engine: WikiEngine, host: str, port: int,
               ui_dist: str | Path | None = None):
    import uvicorn

    uvicorn.run(create_app(engine, ui_dist), host=host, port=port,
                log_level="info")
