import datetime
import random

import pytest

from semwiki.annotations import PageRef, compile_tags, parse_annotations
from semwiki.errors import (DataDirLockedError, PageNotFoundError,
                            PropertyKindConflictError, UpdateNotAllowedError)
from semwiki.namespaces import (OWL_NAMED_INDIVIDUAL, OWL_OBJECT_PROPERTY,
                                RDF_TYPE)
from semwiki.rio import serialize
from semwiki.store import DATA, INFERRED, init_store
from semwiki.terms import Iri
from semwiki.wiki import WikiEngine

W = "http://example.org/wiki/"
DAKAR = PageRef("Main", "Dakar")


def fixed_clock():
    state = {"now": datetime.datetime(2014, 1, 14, 12, 0,
                                      tzinfo=datetime.timezone.utc)}

    def clock():
        state["now"] += datetime.timedelta(minutes=1)
        return state["now"]

    return clock


@pytest.fixture
def engine():
    eng = WikiEngine(clock=fixed_clock())
    yield eng
    eng.close()


def test_first_save(engine):
    result = engine.save_page(DAKAR, "[[Capital::Senegal]]", "alice")
    assert result.revision_id == 1
    assert result.quads_added == 3  # relation, declaration, individual typing
    assert result.quads_removed == 0


def test_identical_resave(engine):
    engine.save_page(DAKAR, "[[Capital::Senegal]]", "alice")
    result = engine.save_page(DAKAR, "[[Capital::Senegal]]", "bob")
    assert result.quads_added == 0
    assert result.quads_removed == 0
    assert result.revision_id == 2
    assert [r["id"] for r in engine.history(DAKAR)] == [2, 1]


def test_edit_replaces_annotations(engine):
    engine.save_page(DAKAR, "[[Capital::Senegal]]", "alice")
    result = engine.save_page(DAKAR, "[[Population::1056009]]", "alice")
    # old compiled set: relation + ObjectProperty decl + typing;
    # new set: attribute + DatatypeProperty decl + typing
    assert result.quads_removed == 2
    assert result.quads_added == 2
    assert engine.store.match(None, Iri(W + "prop/Capital"), None) == []


def test_shared_quads_survive_owner_retraction(engine):
    engine.save_page(DAKAR, "[[Capital::Senegal]]", "a")
    engine.save_page(PageRef("Main", "Thies"), "[[Capital::Senegal]]", "a")
    engine.save_page(DAKAR, "no annotations now", "a")
    decl = engine.store.match(Iri(W + "prop/Capital"), Iri(RDF_TYPE),
                              Iri(OWL_OBJECT_PROPERTY), DATA)
    assert decl  # Thies still asserts the declaration
    engine.save_page(PageRef("Main", "Thies"), "empty too", "a")
    assert engine.store.match(Iri(W + "prop/Capital"), Iri(RDF_TYPE),
                              Iri(OWL_OBJECT_PROPERTY), DATA) == []


def test_conflict_rejected_without_state_change(engine):
    engine.save_page(DAKAR, "[[Population::1056009]]", "a")
    before_data = serialize(engine.store, DATA)
    before_inferred = serialize(engine.store, INFERRED)
    with pytest.raises(PropertyKindConflictError):
        engine.save_page(PageRef("Main", "Thies"), "[[Population::lots]]", "a")
    assert serialize(engine.store, DATA) == before_data
    assert serialize(engine.store, INFERRED) == before_inferred
    with pytest.raises(PageNotFoundError):
        engine.get_page(PageRef("Main", "Thies"))


def test_repinning_after_sole_owner_edit(engine):
    engine.save_page(DAKAR, "[[Size::12]]", "a")
    # Dakar is the only user of Size; the edit re-pins it as a relation
    result = engine.save_page(DAKAR, "[[Size::Large]]", "a")
    assert result.quads_added == 2


def test_get_page_factbox(engine):
    engine.save_page(DAKAR, "[[Capital::Senegal]]", "a")
    view = engine.get_page(DAKAR)
    rows = {(r["property"], getattr(r["value"], "value", None), r["inferred"])
            for r in view["factbox"]}
    assert (W + "prop/Capital", W + "Senegal", False) in rows
    assert (RDF_TYPE, OWL_NAMED_INDIVIDUAL, False) in rows


def test_get_page_prose_only(engine):
    engine.save_page(DAKAR, "nothing semantic", "a")
    view = engine.get_page(DAKAR)
    assert [r for r in view["factbox"] if r["property"] != RDF_TYPE] == []
    assert view["display_text"] == "nothing semantic"


def test_factbox_marks_inferred_types(engine):
    engine.save_page(PageRef("Category", "City"), "[[Category::Locality]]", "a")
    engine.save_page(DAKAR, "[[Category:City]]", "a")
    view = engine.get_page(DAKAR)
    inferred = {r["value"].value for r in view["factbox"] if r["inferred"]}
    assert W + "category/Locality" in inferred


def test_history_not_found(engine):
    with pytest.raises(PageNotFoundError):
        engine.history(PageRef("Main", "Ghost"))


def test_endpoint_rejects_updates(engine):
    engine.save_page(DAKAR, "[[Capital::Senegal]]", "a")
    count = engine.store.count()
    with pytest.raises(UpdateNotAllowedError):
        engine.sparql("INSERT { ?s a owl:Thing } WHERE { ?s ?p ?o }")
    assert engine.store.count() == count


def test_facets_cities_by_region(engine):
    engine.save_page(PageRef("Category", "City"), "[[Category::Locality]]", "a")
    for city, region in (("Thies", "RegionA"), ("Mbour", "RegionA"),
                         ("Kolda", "RegionB")):
        engine.save_page(PageRef("Main", city),
                         f"[[Category:City]] [[isPartOf::{region}]]", "a")
    data = engine.facet_data(Iri(W + "category/City"))
    assert len(data["instances"]) == 3
    facet = {f["property"]: f for f in data["facets"]}[W + "prop/isPartOf"]
    counts = {v["value"].value: v["count"] for v in facet["values"]}
    assert counts == {W + "RegionA": 2, W + "RegionB": 1}
    # subclass instances included under the superclass facet
    lifted = engine.facet_data(Iri(W + "category/Locality"))
    assert len(lifted["instances"]) == 3


def test_facet_selection_narrows(engine):
    for city, region in (("Thies", "RegionA"), ("Mbour", "RegionA"),
                         ("Kolda", "RegionB")):
        engine.save_page(PageRef("Main", city),
                         f"[[Category:City]] [[isPartOf::{region}]]", "a")
    data = engine.facet_data(Iri(W + "category/City"),
                             [(W + "prop/isPartOf", Iri(W + "RegionA"))])
    assert [i.value for i in data["instances"]] == [W + "Mbour", W + "Thies"]


def test_deictic_resolution_uses_revision_timestamp(engine):
    engine.save_page(DAKAR, "[[When::today]] happens [[Category:Event]]", "a")
    # page annotations do not create deictic nodes; craft one directly
    from semwiki.namespaces import HUTO_DAY, HUTO_TODAY, HUTO_YEAR
    from semwiki.terms import Quad

    node = Iri("http://example.org/data/now")
    engine.store.insert(Quad(node, Iri(RDF_TYPE), Iri(HUTO_TODAY), DATA))
    engine.save_page(DAKAR, "[[Capital::Senegal]]", "a")  # triggers remat
    years = engine.store.match(node, Iri(HUTO_YEAR), None, INFERRED)
    assert years and years[0].object.lexical == "2014"
    days = engine.store.match(node, Iri(HUTO_DAY), None, INFERRED)
    assert days and days[0].object.lexical == "14"


# -- durability ---------------------------------------------------------

def scripted_edits(engine, rng, pages=6, rounds=40):
    titles = [f"Page{i}" for i in range(pages)]
    texts = [
        "[[Capital::Senegal]]",
        "[[Population::1056009]] [[Category:City]]",
        "prose only",
        "[[isPartOf::RegionA]] [[HasComment::checked]]",
        "[[Capital::Senegal]] [[isPartOf::RegionB]]",
        "",
    ]
    for _ in range(rounds):
        title = rng.choice(titles)
        engine.save_page(PageRef("Main", title), rng.choice(texts), "bot")


def recompiled_union(engine):
    fresh = init_store()
    quads = set(engine.external_quads)
    for state in engine.pages.values():
        out = parse_annotations(state.page, state.current.wikitext)
        quads |= set(compile_tags(state.page, out.tags, fresh,
                                  engine.base_iri))
    return {q.triple() for q in quads}


def test_save_sequence_consistency(engine):
    rng = random.Random(17)
    scripted_edits(engine, rng)
    warehouse = {q.triple() for q in engine.store.quads(DATA)}
    assert warehouse == recompiled_union(engine)


def test_journal_replay_reproduces_warehouses(tmp_path):
    eng = WikiEngine(data_dir=tmp_path / "w", clock=fixed_clock())
    rng = random.Random(23)
    scripted_edits(eng, rng, rounds=25)
    data_before = serialize(eng.store, DATA)
    inferred_before = serialize(eng.store, INFERRED)
    revisions_before = eng.next_revision_id
    eng.close()

    replayed = WikiEngine(data_dir=tmp_path / "w", clock=fixed_clock())
    assert serialize(replayed.store, DATA) == data_before
    assert serialize(replayed.store, INFERRED) == inferred_before
    assert replayed.next_revision_id == revisions_before
    replayed.close()


def test_truncated_journal_tail_ignored(tmp_path):
    eng = WikiEngine(data_dir=tmp_path / "w", clock=fixed_clock())
    eng.save_page(DAKAR, "[[Capital::Senegal]]", "a")
    eng.save_page(DAKAR, "[[Capital::Gambia]]", "a")
    eng.close()
    journal = tmp_path / "w" / "revisions.log"
    payload = journal.read_bytes()
    journal.write_bytes(payload[:-10])  # simulated crash mid-append

    replayed = WikiEngine(data_dir=tmp_path / "w", clock=fixed_clock())
    # the torn record is dropped; the first save survives
    assert replayed.get_page(DAKAR)["wikitext"] == "[[Capital::Senegal]]"
    replayed.close()


def test_data_dir_lock(tmp_path):
    eng = WikiEngine(data_dir=tmp_path / "w")
    with pytest.raises(DataDirLockedError):
        WikiEngine(data_dir=tmp_path / "w")
    eng.close()
    eng2 = WikiEngine(data_dir=tmp_path / "w")
    eng2.close()


def test_failed_save_not_journaled(tmp_path):
    eng = WikiEngine(data_dir=tmp_path / "w", clock=fixed_clock())
    eng.save_page(DAKAR, "[[Population::1056009]]", "a")
    with pytest.raises(PropertyKindConflictError):
        eng.save_page(PageRef("Main", "Thies"), "[[Population::lots]]", "a")
    eng.close()
    replayed = WikiEngine(data_dir=tmp_path / "w")
    assert (replayed.pages.keys()) == {("Main", "Dakar")}
    replayed.close()
