"""In-memory quad store with named-graph warehouses.

The store interns terms to integer ids and delegates indexing and
pattern matching to the kernel (compiled when available, pure Python
otherwise). Content is partitioned into four registered graphs: three
asserted warehouses (wiki data, the sociocultural vocabulary, the
temporal vocabulary) and one derived graph holding only materialized
inferences, so retraction can rebuild the derived content without
provenance bookkeeping.

Concurrency: single writer, many readers. Readers block only while a
write is in progress; every public operation takes the appropriate lock,
and both locks are re-entrant so rule evaluation can read while its
surrounding save operation holds the write lock.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager

from . import _kernel
from .errors import UnregisteredGraphError
from .namespaces import (GRAPH_DATA, GRAPH_HUTO, GRAPH_INFERRED, GRAPH_USCO,
                         WAREHOUSE_GRAPHS)
from .terms import Iri, Quad, Term

WILDCARD = _kernel.WILDCARD


class RWLock:
    """Reader-writer lock, re-entrant for both roles.

    The thread holding the write lock may freely take read locks (and
    further write locks); other threads wait. New readers are admitted
    while only readers are active.
    """

    def __init__(self):
        self._cond = threading.Condition()
        self._readers: dict[int, int] = {}
        self._writer: int | None = None
        self._writer_depth = 0

    def acquire_read(self):
        me = threading.get_ident()
        with self._cond:
            if self._writer == me or me in self._readers:
                self._readers[me] = self._readers.get(me, 0) + 1
                return
            while self._writer is not None:
                self._cond.wait()
            self._readers[me] = 1

    def release_read(self):
        me = threading.get_ident()
        with self._cond:
            depth = self._readers.get(me, 0) - 1
            if depth <= 0:
                self._readers.pop(me, None)
                self._cond.notify_all()
            else:
                self._readers[me] = depth

    def acquire_write(self):
        me = threading.get_ident()
        with self._cond:
            if self._writer == me:
                self._writer_depth += 1
                return
            while (self._writer is not None
                   or any(t != me for t in self._readers)):
                self._cond.wait()
            self._writer = me
            self._writer_depth = 1

    def release_write(self):
        with self._cond:
            self._writer_depth -= 1
            if self._writer_depth == 0:
                self._writer = None
                self._cond.notify_all()

    @contextmanager
    def read(self):
        self.acquire_read()
        try:
            yield
        finally:
            self.release_read()

    @contextmanager
    def write(self):
        self.acquire_write()
        try:
            yield
        finally:
            self.release_write()


class GraphStore:
    def __init__(self, kernel_cls=None):
        self._kernel = (kernel_cls or _kernel.QuadIndex)()
        self._term_ids: dict[Term, int] = {}
        self._terms: list[Term] = []
        self._graphs: list[Iri] = []
        self._graph_ids: dict[str, int] = {}
        self._lock = RWLock()
        self._version = 0

    @property
    def version(self) -> int:
        """Bumped on every mutation; lets evaluators cache safely."""
        return self._version

    # -- interning ----------------------------------------------------

    def _intern(self, term: Term) -> int:
        tid = self._term_ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._term_ids[term] = tid
            self._terms.append(term)
        return tid

    def _lookup(self, term: Term | None) -> int:
        """Id for matching: WILDCARD for None, -2 for never-seen terms."""
        if term is None:
            return WILDCARD
        tid = self._term_ids.get(term)
        return -2 if tid is None else tid

    # -- graph registry -----------------------------------------------

    def register_graph(self, graph: Iri) -> None:
        with self._lock.write():
            if graph.value not in self._graph_ids:
                gid = self._intern(graph)
                self._graph_ids[graph.value] = gid
                self._graphs.append(graph)
                self._kernel.ensure_graph(gid)

    def registered_graphs(self) -> list[Iri]:
        with self._lock.read():
            return list(self._graphs)

    def is_registered(self, graph: Iri) -> bool:
        with self._lock.read():
            return graph.value in self._graph_ids

    def require_registered(self, graph: Iri) -> None:
        if not self.is_registered(graph):
            raise UnregisteredGraphError(graph.value)

    def _graph_id(self, graph: Iri) -> int:
        gid = self._graph_ids.get(graph.value)
        if gid is None:
            raise UnregisteredGraphError(graph.value)
        return gid

    # -- mutation -----------------------------------------------------

    def insert(self, quad: Quad) -> bool:
        with self._lock.write():
            gid = self._graph_id(quad.graph)
            added = self._kernel.add(gid,
                                     self._intern(quad.subject),
                                     self._intern(quad.predicate),
                                     self._intern(quad.object))
            if added:
                self._version += 1
            return added

    def remove(self, quad: Quad) -> bool:
        with self._lock.write():
            gid = self._graph_id(quad.graph)
            s = self._lookup(quad.subject)
            p = self._lookup(quad.predicate)
            o = self._lookup(quad.object)
            if -2 in (s, p, o):
                return False
            removed = self._kernel.discard(gid, s, p, o)
            if removed:
                self._version += 1
            return removed

    def clear_graph(self, graph: Iri) -> int:
        with self._lock.write():
            cleared = self._kernel.clear_graph(self._graph_id(graph))
            if cleared:
                self._version += 1
            return cleared

    # -- queries ------------------------------------------------------

    def contains(self, quad: Quad) -> bool:
        with self._lock.read():
            gid = self._graph_ids.get(quad.graph.value)
            if gid is None:
                return False
            s = self._lookup(quad.subject)
            p = self._lookup(quad.predicate)
            o = self._lookup(quad.object)
            if -2 in (s, p, o):
                return False
            return self._kernel.contains(gid, s, p, o)

    def match(self, s: Term | None = None, p: Term | None = None,
              o: Term | None = None, g: Iri | None = None) -> list[Quad]:
        """Quads matching the pattern; None positions are wildcards.

        An unbound graph ranges over every registered graph, in
        registration order.
        """
        with self._lock.read():
            sid = self._lookup(s)
            pid = self._lookup(p)
            oid = self._lookup(o)
            if -2 in (sid, pid, oid):
                return []
            if g is None:
                gids = [self._graph_ids[gr.value] for gr in self._graphs]
            else:
                gid = self._graph_ids.get(g.value)
                if gid is None:
                    return []
                gids = [gid]
            out = []
            terms = self._terms
            for gid in gids:
                graph_term = terms[gid]
                for ms, mp, mo in self._kernel.match(gid, sid, pid, oid):
                    out.append(Quad(terms[ms], terms[mp], terms[mo], graph_term))
            return out

    def match_terms_nolock(self, s: Term | None, p: Term | None,
                           o: Term | None, g: Iri) -> list:
        """(s, p, o) triples matching in one graph. The caller must
        already hold a read or write lock; the hot evaluation path uses
        this to avoid per-call lock churn and Quad allocation."""
        sid = self._lookup(s)
        pid = self._lookup(p)
        oid = self._lookup(o)
        if -2 in (sid, pid, oid):
            return []
        gid = self._graph_ids.get(g.value)
        if gid is None:
            return []
        terms = self._terms
        return [(terms[a], terms[b], terms[c])
                for a, b, c in self._kernel.match(gid, sid, pid, oid)]

    def count(self, g: Iri | None = None) -> int:
        with self._lock.read():
            if g is not None:
                return self._kernel.size(self._graph_id(g))
            return sum(self._kernel.size(self._graph_ids[gr.value])
                       for gr in self._graphs)

    def quads(self, g: Iri) -> list[Quad]:
        return self.match(g=g)

    def triples(self, g: Iri) -> list[tuple[Term, Term, Term]]:
        return [q.triple() for q in self.match(g=g)]

    # locks are exposed for multi-step operations (save pipeline,
    # fixpoint runs) that must appear atomic to readers
    @contextmanager
    def read_locked(self):
        with self._lock.read():
            yield

    @contextmanager
    def write_locked(self):
        with self._lock.write():
            yield


DATA = Iri(GRAPH_DATA)
USCO = Iri(GRAPH_USCO)
HUTO = Iri(GRAPH_HUTO)
INFERRED = Iri(GRAPH_INFERRED)

ASSERTED_GRAPHS = (DATA, USCO, HUTO)
ALL_GRAPHS = (DATA, USCO, HUTO, INFERRED)


def init_store(kernel_cls=None) -> GraphStore:
    """Fresh store with the three warehouses plus the derived graph."""
    store = GraphStore(kernel_cls=kernel_cls)
    for iri in WAREHOUSE_GRAPHS:
        store.register_graph(Iri(iri))
    return store
