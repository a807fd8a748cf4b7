"""Federated import: query an external SPARQL endpoint and ingest the
rows under a class/property alignment.

The transport is injectable so tests and offline replays run against
recorded response files; nothing in the test suite touches the network.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlparse

from .errors import FederationError, MalformedResponseError
from .namespaces import IMPORT_SOURCE
from .results import solutions_from_json
from .sparql.ast import SolutionSet, Var
from .sparql.parser import parse_query
from .store import DATA
from .terms import Iri, Literal, Quad


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    timeout_ms: int = 30000

    def __post_init__(self):
        scheme = urlparse(self.url).scheme
        if scheme not in ("http", "https"):
            raise ValueError(f"endpoint URL must be http(s): {self.url}")


@dataclass
class AlignmentMap:
    class_mappings: dict[str, str] = field(default_factory=dict)
    property_mappings: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for mapping in (self.class_mappings, self.property_mappings):
            for start in mapping:
                seen = {start}
                cur = mapping.get(start)
                while cur is not None:
                    if cur in seen:
                        raise ValueError(f"alignment cycle at {start}")
                    seen.add(cur)
                    cur = mapping.get(cur)

    def map_class(self, iri: Iri) -> Iri:
        target = self.class_mappings.get(iri.value)
        return Iri(target) if target else iri

    def map_property(self, iri: Iri) -> Iri:
        target = self.property_mappings.get(iri.value)
        return Iri(target) if target else iri


def parse_alignment(text: str) -> AlignmentMap:
    """Line-oriented ``external-IRI <TAB> local-IRI``; ``#`` comments.

    The file does not distinguish class from property mappings; each
    line feeds both tables."""
    classes = {}
    props = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2:
            raise ValueError(f"alignment line {lineno}: expected two "
                             "tab-separated IRIs")
        external, local = parts[0].strip(), parts[1].strip()
        classes[external] = local
        props[external] = local
    return AlignmentMap(classes, props)


# ---------------------------------------------------------------------
# transports

def http_transport(url: str, params: dict, headers: dict,
                   timeout_s: float) -> tuple[int, bytes]:
    import requests

    try:
        resp = requests.get(url, params=params, headers=headers,
                            timeout=timeout_s)
    except requests.Timeout as exc:
        raise FederationError(f"endpoint timed out: {url}") from exc
    except requests.RequestException as exc:
        raise FederationError(f"network error: {exc}") from exc
    return resp.status_code, resp.content


def fixture_transport(path: str | Path):
    """Replays a recorded response body regardless of the query."""
    data = Path(path).read_bytes()

    def transport(url, params, headers, timeout_s):
        return 200, data

    return transport


def fetch_select(endpoint: EndpointConfig, query_text: str,
                 transport=None) -> SolutionSet:
    ast = parse_query(query_text)
    if ast.form != "select":
        raise ValueError("fetch_select requires a SELECT query")
    transport = transport or http_transport
    status, body = transport(
        endpoint.url,
        {"query": query_text},
        {"Accept": "application/sparql-results+json"},
        endpoint.timeout_ms / 1000.0,
    )
    if status != 200:
        raise FederationError(f"endpoint returned HTTP {status}")
    return solutions_from_json(body)


# ---------------------------------------------------------------------
# ingestion

@dataclass
class ImportReport:
    fetched_rows: int = 0
    ingested_quads: int = 0
    skipped_rows: list[tuple[int, str]] = field(default_factory=list)


def align_and_ingest(store, solutions: SolutionSet, alignment: AlignmentMap,
                     template, source: str | None = None,
                     on_new_quad=None) -> ImportReport:
    """Instantiate the triple template per row, rewrite IRIs through the
    alignment, insert into the data warehouse.

    Rows that leave a template variable unbound are skipped with a
    reason. When anything new lands and a source is given, one batch
    provenance quad (batch node, source URL + timestamp) is added; it is
    not counted in ingested_quads.
    """
    declared = set(solutions.variables)
    for s, p, o in template:
        for t in (s, p, o):
            if isinstance(t, Var) and t not in declared:
                raise ValueError(f"template variable ?{t.name} not in results")

    report = ImportReport(fetched_rows=len(solutions.rows))

    def resolve(term, row):
        return row.get(term) if isinstance(term, Var) else term

    with store.write_locked():
        for index, row in enumerate(solutions.rows):
            instantiated = []
            missing = None
            for s, p, o in template:
                ts, tp, to = resolve(s, row), resolve(p, row), resolve(o, row)
                if ts is None or tp is None or to is None:
                    missing = next(t.name for t in (s, p, o)
                                   if isinstance(t, Var) and resolve(t, row) is None)
                    break
                if isinstance(ts, Literal) or not isinstance(tp, Iri):
                    missing = "ill-formed triple"
                    break
                if isinstance(ts, Iri):
                    ts = alignment.map_class(ts)
                tp = alignment.map_property(tp)
                if isinstance(to, Iri):
                    to = alignment.map_class(to)
                instantiated.append(Quad(ts, tp, to, DATA))
            if missing is not None:
                reason = missing if missing == "ill-formed triple" \
                    else f"unbound ?{missing}"
                report.skipped_rows.append((index, reason))
                continue
            for quad in instantiated:
                if store.insert(quad):
                    report.ingested_quads += 1
                    if on_new_quad is not None:
                        on_new_quad(quad)
        if report.ingested_quads and source:
            stamp = datetime.datetime.now(datetime.timezone.utc)
            batch = Iri(f"urn:import:{stamp.strftime('%Y%m%dT%H%M%S.%f')}")
            prov = Quad(batch, Iri(IMPORT_SOURCE),
                        Literal(f"{source} {stamp.isoformat()}"), DATA)
            if store.insert(prov) and on_new_quad is not None:
                on_new_quad(prov)
    return report
