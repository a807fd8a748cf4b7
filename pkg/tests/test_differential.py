"""Evaluator vs. brute-force assignment-enumeration oracle on random
stores and queries. The acceptance suite runs the full 200-case batch;
this module keeps a fast seeded sample for day-to-day runs."""

import random

from helpers import canon_rows
from oracle import oracle_select, random_query, random_store
from semwiki.sparql.eval import evaluate_select
from semwiki.store import init_store


def test_differential_sample():
    rng = random.Random(1234)
    for case in range(60):
        store = random_store(rng, init_store())
        ast = random_query(rng)
        got = canon_rows(evaluate_select(store, ast).rows)
        want = canon_rows(oracle_select(store, ast))
        assert got == want, f"case {case}: {ast}"


def test_oracle_sanity_on_known_join():
    from semwiki.sparql.parser import parse_query
    from semwiki.store import DATA
    from semwiki.terms import Iri, Quad

    store = init_store()
    a, p, b, c = (Iri(f"http://t.example/{n}") for n in "apbc")
    store.insert(Quad(a, p, b, DATA))
    store.insert(Quad(b, p, c, DATA))
    ast = parse_query("SELECT * WHERE { ?x <http://t.example/p> ?y . "
                      "?y <http://t.example/p> ?z }")
    rows = oracle_select(store, ast)
    assert canon_rows(rows) == canon_rows(evaluate_select(store, ast).rows)
    assert len(rows) == 1
