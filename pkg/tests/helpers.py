"""Shared test utilities: canonical forms for comparing solution
multisets and triple sets, independent closure oracles, and fixture
builders for before/after chains."""

from __future__ import annotations

import itertools

from semwiki.namespaces import (DATA_NS, HUTO_BEFORE, HUTO_HAS_TEMPORAL_EXP,
                                HUTO_TEMPORAL_ANNOTATION,
                                HUTO_TEMPORAL_EXPRESSION, HUTO_URI, RDF_TYPE)
from semwiki.rio import term_to_ntriples
from semwiki.store import DATA
from semwiki.terms import Blank, Iri, Quad, triple_sort_key


def canon_rows(rows) -> list:
    """Multiset-comparable form of solution rows."""
    return sorted(
        tuple(sorted((v.name, term_to_ntriples(t)) for v, t in row.items()))
        for row in rows
    )


def canon_triples(triples) -> list:
    return sorted(set(triples), key=triple_sort_key)


def relabel_blanks(triples):
    """Label-independent canonical blank relabeling (signature
    refinement; sufficient for asymmetric fixture graphs)."""
    triples = list(set(triples))
    blanks = {t for tr in triples for t in tr if isinstance(t, Blank)}
    sig = {b: "" for b in blanks}

    def term_key(t):
        if isinstance(t, Blank):
            return ("B", sig[t])
        return ("T", term_to_ntriples(t))

    for _ in range(3):
        sig = {
            b: repr(sorted(
                [("out", term_to_ntriples(p), term_key(o))
                 for s, p, o in triples if s == b]
                + [("in", term_key(s), term_to_ntriples(p))
                   for s, p, o in triples if o == b]))
            for b in blanks
        }
    order = sorted(blanks, key=lambda b: (sig[b], term_to_ntriples(b)))
    mapping = {b: Blank(f"c{i}") for i, b in enumerate(order)}

    def rename(term):
        return mapping.get(term, term) if isinstance(term, Blank) else term

    return canon_triples((rename(s), rename(p), rename(o))
                         for s, p, o in triples)


def transitive_closure(pairs: set[tuple]) -> set[tuple]:
    """Brute-force closure by repeated squaring-free iteration."""
    closure = set(pairs)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c}
        if extra <= closure:
            return closure
        closure |= extra


def data_iri(name: str) -> Iri:
    return Iri(DATA_NS + name)


def build_before_chain(store, k: int, *, asserted_level: str = "expression"):
    """k expressions/annotations/resources; consecutive before facts
    asserted at the given level. Returns (exprs, anns, resources)."""
    exprs = [data_iri(f"e{i}") for i in range(1, k + 1)]
    anns = [data_iri(f"a{i}") for i in range(1, k + 1)]
    resources = [data_iri(f"r{i}") for i in range(1, k + 1)]
    rdf_type = Iri(RDF_TYPE)
    for e, a, r in zip(exprs, anns, resources):
        store.insert(Quad(e, rdf_type, Iri(HUTO_TEMPORAL_EXPRESSION), DATA))
        store.insert(Quad(a, rdf_type, Iri(HUTO_TEMPORAL_ANNOTATION), DATA))
        store.insert(Quad(a, Iri(HUTO_HAS_TEMPORAL_EXP), e, DATA))
        store.insert(Quad(a, Iri(HUTO_URI), r, DATA))
    level = {"expression": exprs, "annotation": anns}[asserted_level]
    for x, y in itertools.pairwise(level):
        store.insert(Quad(x, Iri(HUTO_BEFORE), y, DATA))
    return exprs, anns, resources


def relation_pairs(store, nodes, predicate: str) -> set[tuple]:
    wanted = {n.value for n in nodes}
    pairs = set()
    for q in store.match(None, Iri(predicate), None):
        if isinstance(q.subject, Iri) and isinstance(q.object, Iri) \
                and q.subject.value in wanted and q.object.value in wanted:
            pairs.add((q.subject.value, q.object.value))
    return pairs
