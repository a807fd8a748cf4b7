import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semwiki import _kernel
from semwiki.errors import UnregisteredGraphError
from semwiki.namespaces import OWL_OBJECT_PROPERTY, RDF_TYPE
from semwiki.store import ALL_GRAPHS, DATA, HUTO, INFERRED, USCO, init_store
from semwiki.terms import Blank, Iri, Literal, Quad, TermError

EX = "http://ex.test/"


def iri(name):
    return Iri(EX + name)


def quad(s, p, o, g=DATA):
    return Quad(iri(s), iri(p), iri(o), g)


def test_init_store_has_four_empty_graphs(store):
    graphs = [g.value for g in store.registered_graphs()]
    assert graphs == ["urn:warehouse:data", "urn:warehouse:usco",
                      "urn:warehouse:huto", "urn:warehouse:inferred"]
    assert store.count() == 0


def test_insert_then_count(store):
    assert store.insert(quad("a", "p", "b"))
    assert store.count() == 1


def test_two_stores_are_independent(kernel_cls):
    s1 = init_store(kernel_cls=kernel_cls)
    s2 = init_store(kernel_cls=kernel_cls)
    s1.insert(quad("a", "p", "b"))
    assert s1.count() == 1
    assert s2.count() == 0


def test_set_semantics(store):
    assert store.insert(quad("a", "p", "b")) is True
    assert store.insert(quad("a", "p", "b")) is False
    assert store.count() == 1


def test_capital_example(store):
    q = Quad(Iri("http://example.org/wiki/Dakar"),
             Iri("http://example.org/wiki/prop/Capital"),
             Iri("http://example.org/wiki/Senegal"), DATA)
    store.insert(q)
    rows = store.match(None, Iri("http://example.org/wiki/prop/Capital"), None)
    assert rows == [q]


def test_insert_unregistered_graph(store):
    with pytest.raises(UnregisteredGraphError):
        store.insert(Quad(iri("a"), iri("p"), iri("b"),
                          Iri("urn:warehouse:nope")))


def test_match_empty_store(store):
    assert store.match() == []


def test_match_shared_predicate(store):
    for s in ("x", "y", "z"):
        store.insert(quad(s, "p", "o" + s))
    store.insert(quad("x", "other", "w"))
    assert len(store.match(None, iri("p"), None)) == 3


def test_match_object_property_declaration(store):
    store.insert(Quad(Iri(EX + "prop/Capital"), Iri(RDF_TYPE),
                      Iri(OWL_OBJECT_PROPERTY), DATA))
    store.insert(quad("Dakar", "prop/Capital", "Senegal"))
    hits = store.match(None, Iri(RDF_TYPE), Iri(OWL_OBJECT_PROPERTY))
    assert [q.subject.value for q in hits] == [EX + "prop/Capital"]


def test_match_graph_bound(store):
    store.insert(quad("a", "p", "b", DATA))
    store.insert(quad("a", "p", "b", HUTO))
    assert len(store.match(iri("a"), None, None)) == 2
    assert len(store.match(iri("a"), None, None, g=DATA)) == 1


def test_remove(store):
    q = quad("a", "p", "b")
    store.insert(q)
    assert store.remove(q) is True
    assert store.remove(q) is False
    assert store.count() == 0
    assert store.match() == []


def test_clear_graph(store):
    store.insert(quad("a", "p", "b", DATA))
    store.insert(quad("a", "p", "b", HUTO))
    assert store.clear_graph(DATA) == 1
    assert store.count() == 1
    assert store.count(HUTO) == 1


def test_literal_and_blank_terms(store):
    q = Quad(Blank("n1"), iri("p"), Literal("42", datatype=EX + "int"), DATA)
    store.insert(q)
    assert store.match(Blank("n1"), None, None) == [q]
    assert store.match(None, None, Literal("42", datatype=EX + "int")) == [q]
    assert store.match(None, None, Literal("42")) == []


def test_quad_validation():
    with pytest.raises(TermError):
        Quad(Literal("x"), iri("p"), iri("o"), DATA)
    with pytest.raises(TermError):
        Quad(iri("s"), Blank("b"), iri("o"), DATA)
    with pytest.raises(TermError):
        Quad(iri("s"), iri("p"), iri("o"), Blank("g"))


# -- properties --------------------------------------------------------

_terms = st.sampled_from([Iri(EX + n) for n in "abcdef"]
                         + [Blank("b1"), Blank("b2"), Literal("v1"),
                            Literal("v2", datatype=EX + "dt")])
_subjects = _terms.filter(lambda t: not isinstance(t, Literal))
_preds = st.sampled_from([Iri(EX + p) for p in ("p", "q", "r")])
_graphs = st.sampled_from(list(ALL_GRAPHS))
_quads = st.builds(Quad, _subjects, _preds, _terms, _graphs)


@settings(max_examples=60, deadline=None)
@given(st.lists(_quads, max_size=25), _subjects | st.none(),
       _preds | st.none(), _terms | st.none(), _graphs | st.none())
def test_match_agrees_with_brute_filter(quads, s, p, o, g):
    for kernel_name, kernel_cls in _kernel.available_backends().items():
        store = init_store(kernel_cls=kernel_cls)
        for q in quads:
            store.insert(q)
        got = set(map(repr, store.match(s, p, o, g)))
        want = {repr(q) for q in set(quads)
                if (s is None or q.subject == s)
                and (p is None or q.predicate == p)
                and (o is None or q.object == o)
                and (g is None or q.graph == g)}
        assert got == want, kernel_name


@settings(max_examples=40, deadline=None)
@given(st.lists(_quads, max_size=25))
def test_monotone_size(quads):
    store = init_store()
    for q in quads:
        store.insert(q)
    assert store.count() == len(set(quads))


@settings(max_examples=30, deadline=None)
@given(st.lists(_quads, max_size=20), st.lists(_quads, max_size=8))
def test_insert_remove_consistency(inserted, removed):
    store = init_store()
    for q in inserted:
        store.insert(q)
    for q in removed:
        store.remove(q)
    expected = set(inserted) - set(removed)
    assert store.count() == len(expected)
    assert set(map(repr, store.match())) == set(map(repr, expected))


def test_kernel_backends_equivalent():
    backends = _kernel.available_backends()
    if len(backends) < 2:
        pytest.skip("only one kernel backend built")
    import random

    rng = random.Random(7)
    stores = {name: init_store(kernel_cls=cls) for name, cls in backends.items()}
    names = list("abcdefgh")
    for _ in range(300):
        op = rng.random()
        s, p, o = rng.choice(names), rng.choice(names[:3]), rng.choice(names)
        g = rng.choice(list(ALL_GRAPHS))
        if op < 0.7:
            results = {store.insert(quad(s, p, o, g)) for store in stores.values()}
        else:
            results = {store.remove(quad(s, p, o, g)) for store in stores.values()}
        assert len(results) == 1
    reference = None
    for store in stores.values():
        state = sorted(map(repr, store.match()))
        if reference is None:
            reference = state
        assert state == reference


def test_concurrent_readers_and_writer(fresh_store):
    store = fresh_store
    for i in range(50):
        store.insert(quad(f"s{i}", "p", f"o{i}"))
    errors = []

    def reader():
        try:
            for _ in range(200):
                rows = store.match(None, iri("p"), None)
                assert 50 <= len(rows) <= 250
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    def writer():
        try:
            for i in range(200):
                store.insert(quad(f"w{i}", "p", f"o{i}"))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=reader) for _ in range(4)]
    threads.append(threading.Thread(target=writer))
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert store.count() == 250
