"""Page repository and save pipeline.

A save appends the revision to the journal, recompiles the page's
annotations, swaps the page's attributed quads in the data warehouse,
and rebuilds the derived graph from scratch (subclass lifting, month
normalization, the temporal catalog, and deictic resolution against the
revision timestamp as discourse time).

Quad attribution lives in a sidecar index: each data-warehouse quad
knows its owners (pages, or the external-import owner), so retracting a
page never drops a statement another page still asserts.

Durability: an append-only journal of full-text revisions plus
canonical snapshots of non-page content (ontology loads and federated
imports). Restart replays both and rematerializes.
"""

from __future__ import annotations

import datetime
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .annotations import (PageRef, ParseOutcome, compile_tags, page_iri,
                          parse_annotations)
from .errors import (DataDirLockedError, PageNotFoundError,
                     UpdateNotAllowedError)
from .namespaces import (GRAPH_ALIASES, RDF_TYPE, WIKI_NS)
from .rio import (FORMAT_NTRIPLES, load_rdf, parse_ntriples, serialize,
                  serialize_ntriples)
from .rules import FixpointReport, RuleSet, rdfs_lite_ruleset
from .sparql.ast import SolutionSet
from .sparql.eval import (evaluate_construct, evaluate_describe,
                          evaluate_select, execute_insert_where)
from .sparql.parser import parse_query
from .store import DATA, HUTO, INFERRED, USCO, init_store
from .temporal import (DiscourseTime, load_huto_vocabulary, materialize,
                       normalization_ruleset, temporal_ruleset)
from .terms import Iri, Quad, Term

EXTERNAL_OWNER = "external"


@dataclass(frozen=True)
class Revision:
    id: int
    page: PageRef
    timestamp: datetime.datetime
    author: str
    wikitext: str


@dataclass
class SaveResult:
    revision_id: int
    quads_added: int
    quads_removed: int
    fixpoint: FixpointReport
    diagnostics: list


@dataclass
class PageState:
    page: PageRef
    revisions: list[Revision] = field(default_factory=list)
    outcome: ParseOutcome = field(default_factory=ParseOutcome)
    quads: set = field(default_factory=set)

    @property
    def current(self) -> Revision:
        return self.revisions[-1]


class RevisionJournal:
    """Append-only, length-prefixed JSON records, fsynced per append."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._fh = open(self.path, "ab")

    def append(self, record: dict) -> None:
        payload = json.dumps(record, ensure_ascii=False).encode("utf-8")
        self._fh.write(b"%d\n" % len(payload))
        self._fh.write(payload)
        self._fh.write(b"\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self):
        self._fh.close()

    def replay(self):
        if not self.path.exists():
            return
        with open(self.path, "rb") as fh:
            while True:
                header = fh.readline()
                if not header.strip():
                    return
                length = int(header)
                payload = fh.read(length)
                if len(payload) < length:
                    return  # truncated tail (interrupted write)
                fh.readline()  # trailing newline
                yield json.loads(payload.decode("utf-8"))


def combined_ruleset() -> RuleSet:
    return RuleSet(rdfs_lite_ruleset().rules
                   + normalization_ruleset().rules
                   + temporal_ruleset().rules)


_SNAPSHOTS = {"usco": USCO, "huto": HUTO}


class WikiEngine:
    """Everything the HTTP layer and the CLI share: the store, the page
    repository, rule materialization, queries and exports."""

    def __init__(self, data_dir: str | Path | None = None,
                 base_iri: str = WIKI_NS, kernel_cls=None, clock=None):
        self.base_iri = base_iri
        self.clock = clock or (lambda: datetime.datetime.now(datetime.timezone.utc))
        self.store = init_store(kernel_cls=kernel_cls)
        self.ruleset = combined_ruleset()
        self.pages: dict[tuple[str, str], PageState] = {}
        self.quad_owners: dict[Quad, set] = {}
        self.external_quads: set[Quad] = set()
        self.next_revision_id = 1
        self.journal: RevisionJournal | None = None
        self.data_dir: Path | None = None
        self._lock = None
        self._discourse: DiscourseTime | None = None

        load_huto_vocabulary(self.store)
        if data_dir is not None:
            self._open_data_dir(Path(data_dir))

    # -- durability -----------------------------------------------------

    def _open_data_dir(self, data_dir: Path):
        import filelock

        data_dir.mkdir(parents=True, exist_ok=True)
        self.data_dir = data_dir
        lock = filelock.FileLock(str(data_dir / ".semwiki.lock"))
        try:
            lock.acquire(timeout=0)
        except filelock.Timeout:
            raise DataDirLockedError(
                f"data directory {data_dir} is locked by another process")
        self._lock = lock

        for name, graph in _SNAPSHOTS.items():
            path = data_dir / f"{name}.nt"
            if path.exists():
                load_rdf(self.store, path.read_text(), FORMAT_NTRIPLES, graph)
        external = data_dir / "external-data.nt"
        if external.exists():
            for s, p, o in parse_ntriples(external.read_text()):
                quad = Quad(s, p, o, DATA)
                self.store.insert(quad)
                self._own(quad, EXTERNAL_OWNER)

        self.journal = RevisionJournal(data_dir / "revisions.log")
        replayed = False
        for record in self.journal.replay():
            page = PageRef(record["ns"], record["title"])
            timestamp = datetime.datetime.fromisoformat(record["timestamp"])
            self._apply_save(page, record["wikitext"], record["author"],
                             timestamp, record["id"], journal=False,
                             rematerialize=False)
            replayed = True
        if replayed or self.external_quads:
            self.rematerialize()

    def close(self):
        if self.journal is not None:
            self.journal.close()
        if self._lock is not None:
            self._lock.release()

    def _snapshot_graph(self, name: str):
        if self.data_dir is None:
            return
        graph = _SNAPSHOTS[name]
        path = self.data_dir / f"{name}.nt"
        tmp = path.with_suffix(".nt.tmp")
        tmp.write_text(serialize(self.store, graph))
        tmp.replace(path)

    def _snapshot_external(self):
        if self.data_dir is None:
            return
        path = self.data_dir / "external-data.nt"
        tmp = path.with_suffix(".nt.tmp")
        tmp.write_text(serialize_ntriples(q.triple()
                                          for q in self.external_quads))
        tmp.replace(path)

    # -- quad attribution ------------------------------------------------

    def _own(self, quad: Quad, owner) -> None:
        self.quad_owners.setdefault(quad, set()).add(owner)
        if owner == EXTERNAL_OWNER:
            self.external_quads.add(quad)

    def _disown(self, quad: Quad, owner) -> None:
        owners = self.quad_owners.get(quad)
        if owners is None:
            return
        owners.discard(owner)
        if not owners:
            del self.quad_owners[quad]
            self.store.remove(quad)

    # -- save pipeline ----------------------------------------------------

    def save_page(self, page: PageRef, wikitext: str, author: str) -> SaveResult:
        timestamp = self.clock()
        revision_id = self.next_revision_id
        return self._apply_save(page, wikitext, author, timestamp,
                                revision_id, journal=True)

    def _apply_save(self, page: PageRef, wikitext: str, author: str,
                    timestamp, revision_id: int, *, journal: bool,
                    rematerialize: bool = True) -> SaveResult:
        key = (page.namespace, page.title)
        with self.store.write_locked():
            state = self.pages.get(key)
            old_quads = set(state.quads) if state else set()

            # retract first so declaration pinning sees the store as it
            # will be without this page, then compile (which may reject)
            for quad in old_quads:
                self._disown(quad, key)
            try:
                outcome = parse_annotations(page, wikitext)
                new_quads = set(compile_tags(page, outcome.tags, self.store,
                                             self.base_iri))
                if journal and self.journal is not None:
                    self.journal.append({
                        "id": revision_id, "ns": page.namespace,
                        "title": page.title, "author": author,
                        "timestamp": timestamp.isoformat(),
                        "wikitext": wikitext,
                    })
            except Exception:
                for quad in old_quads:  # failed save leaves no trace
                    self.store.insert(quad)
                    self._own(quad, key)
                raise

            for quad in new_quads:
                self.store.insert(quad)
                self._own(quad, key)

            revision = Revision(revision_id, page, timestamp, author, wikitext)
            if state is None:
                state = PageState(page)
                self.pages[key] = state
            state.revisions.append(revision)
            state.outcome = outcome
            state.quads = new_quads
            self.next_revision_id = max(self.next_revision_id, revision_id) + 1

            self._discourse = DiscourseTime.from_instant(timestamp)
            if rematerialize:
                report = self.rematerialize()
            else:
                report = FixpointReport(0, {})

        return SaveResult(
            revision_id=revision_id,
            quads_added=len(new_quads - old_quads),
            quads_removed=len(old_quads - new_quads),
            fixpoint=report,
            diagnostics=list(outcome.diagnostics),
        )

    def rematerialize(self) -> FixpointReport:
        """Clear the derived graph and rebuild it from the asserted
        warehouses."""
        with self.store.write_locked():
            self.store.clear_graph(INFERRED)
            return materialize(self.store, self.ruleset, self._discourse)

    # -- reads --------------------------------------------------------------

    def _state(self, page: PageRef) -> PageState:
        state = self.pages.get((page.namespace, page.title))
        if state is None:
            raise PageNotFoundError(f"{page.namespace}:{page.title}")
        return state

    def get_page(self, page: PageRef) -> dict:
        with self.store.read_locked():
            state = self._state(page)
            subject = page_iri(page, self.base_iri)
            factbox = []
            grouped: dict[str, list] = {}
            for quad in sorted(state.quads, key=lambda q: str(q)):
                if quad.subject == subject and quad.predicate.value != RDF_TYPE:
                    grouped.setdefault(quad.predicate.value, []).append(quad.object)
            asserted_types = {q.object for q in state.quads
                              if q.subject == subject
                              and q.predicate.value == RDF_TYPE}
            for prop in sorted(grouped):
                for value in grouped[prop]:
                    factbox.append({"property": prop, "value": value,
                                    "inferred": False})
            for t in sorted(asserted_types, key=str):
                factbox.append({"property": RDF_TYPE, "value": t,
                                "inferred": False})
            for quad in self.store.match(subject, Iri(RDF_TYPE), None, INFERRED):
                if quad.object not in asserted_types:
                    factbox.append({"property": RDF_TYPE, "value": quad.object,
                                    "inferred": True})
            current = state.current
            return {
                "page": page,
                "display_text": state.outcome.display_text,
                "wikitext": current.wikitext,
                "factbox": factbox,
                "revision": {"id": current.id, "author": current.author,
                             "timestamp": current.timestamp.isoformat()},
            }

    def history(self, page: PageRef) -> list[dict]:
        state = self._state(page)
        return [{"id": r.id, "author": r.author,
                 "timestamp": r.timestamp.isoformat()}
                for r in reversed(state.revisions)]

    # -- queries ---------------------------------------------------------

    def sparql(self, query_text: str, allow_update: bool = False):
        """-> ("select", SolutionSet) | ("triples", list) | ("update", int)"""
        ast = parse_query(query_text)
        if ast.form == "select":
            return "select", evaluate_select(self.store, ast)
        if ast.form == "construct":
            return "triples", evaluate_construct(self.store, ast)
        if ast.form == "describe":
            return "triples", evaluate_describe(self.store, ast)
        if not allow_update:
            raise UpdateNotAllowedError("update queries are not allowed "
                                        "on the read-only endpoint")
        inserted = execute_insert_where(self.store, ast, DATA)
        if inserted:
            for quad in self.store.quads(DATA):
                if quad not in self.quad_owners:
                    self._own(quad, EXTERNAL_OWNER)
            self._snapshot_external()
        return "update", inserted

    def facet_data(self, class_iri: Iri, selections=()) -> dict:
        """Instances of a class (inferred typing included) and their
        per-property value histograms.

        ``selections`` narrows the instance set first: each (property
        IRI, value term) pair must hold for an instance to count.
        """
        with self.store.read_locked():
            instances = {q.subject for q in
                         self.store.match(None, Iri(RDF_TYPE), class_iri)}
            for prop, value in selections:
                instances = {i for i in instances
                             if self.store.match(i, Iri(prop), value, DATA)}
            pairs: dict[str, set] = {}
            for instance in instances:
                for quad in self.store.match(instance, None, None, DATA):
                    if quad.predicate.value == RDF_TYPE:
                        continue
                    pairs.setdefault(quad.predicate.value, set()).add(
                        (instance, quad.object))
            facets = []
            for prop in sorted(pairs):
                counts: dict[Term, int] = {}
                for _, value in pairs[prop]:
                    counts[value] = counts.get(value, 0) + 1
                values = sorted(counts.items(),
                                key=lambda kv: (-kv[1], str(kv[0])))
                facets.append({
                    "property": prop,
                    "values": [{"value": v, "count": c} for v, c in values],
                })
            return {
                "class": class_iri,
                "instances": sorted((i for i in instances if isinstance(i, Iri)),
                                    key=lambda t: t.value),
                "facets": facets,
            }

    # -- loading and export ------------------------------------------------

    def resolve_graph(self, name: str) -> Iri:
        if name in GRAPH_ALIASES:
            return Iri(GRAPH_ALIASES[name])
        return Iri(name)

    def load_graph(self, text: str, fmt: str, graph: Iri) -> int:
        if graph == INFERRED:
            raise ValueError("cannot load asserted data into the derived graph")
        if graph == DATA:
            count = 0
            with self.store.write_locked():
                before = {q for q in self.store.quads(DATA)}
                count = load_rdf(self.store, text, fmt, DATA)
                for quad in self.store.quads(DATA):
                    if quad not in before and quad not in self.quad_owners:
                        self._own(quad, EXTERNAL_OWNER)
            self._snapshot_external()
        else:
            count = load_rdf(self.store, text, fmt, graph)
            for name, g in _SNAPSHOTS.items():
                if g == graph:
                    self._snapshot_graph(name)
        self.rematerialize()
        return count

    def federate(self, solutions: SolutionSet, alignment, template,
                 source: str | None = None):
        from .federation import align_and_ingest

        report = align_and_ingest(
            self.store, solutions, alignment, template, source=source,
            on_new_quad=lambda q: self._own(q, EXTERNAL_OWNER))
        self._snapshot_external()
        self.rematerialize()
        return report

    def export_graph(self, graph: Iri) -> str:
        return serialize(self.store, graph)
