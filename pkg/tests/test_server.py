import json

import pytest
from fastapi.testclient import TestClient

from conftest import fixture_text
from semwiki.annotations import PageRef
from semwiki.server import create_app
from semwiki.wiki import WikiEngine

W = "http://example.org/wiki/"


@pytest.fixture
def client():
    engine = WikiEngine()
    yield TestClient(create_app(engine))
    engine.close()


def save(client, ns, title, text, author="tester"):
    return client.put(f"/pages/{ns}/{title}",
                      json={"wikitext": text, "author": author})


def test_put_and_get_page(client):
    r = save(client, "Main", "Dakar", "[[Capital::Senegal]]")
    assert r.status_code == 200
    body = r.json()
    assert body["revision"] == 1
    assert body["quads_added"] == 3
    r = client.get("/pages/Main/Dakar")
    assert r.status_code == 200
    page = r.json()
    assert page["display_text"] == "Senegal"
    assert page["wikitext"] == "[[Capital::Senegal]]"
    facts = {(f["property"], f["value"]["value"]) for f in page["factbox"]}
    assert (W + "prop/Capital", W + "Senegal") in facts


def test_put_plain_text_body(client):
    r = client.put("/pages/Main/Thies", content="[[isPartOf::RegionA]]",
                   headers={"content-type": "text/plain"})
    assert r.status_code == 200
    assert r.json()["quads_added"] == 3


def test_get_missing_page(client):
    r = client.get("/pages/Main/Ghost")
    assert r.status_code == 404
    assert r.json()["kind"] == "PageNotFoundError"


def test_conflict_maps_to_409(client):
    save(client, "Main", "Dakar", "[[Population::1056009]]")
    r = save(client, "Main", "Thies", "[[Population::lots]]")
    assert r.status_code == 409
    assert r.json()["kind"] == "PropertyKindConflictError"


def test_history_endpoint(client):
    save(client, "Main", "Dakar", "one")
    save(client, "Main", "Dakar", "two")
    r = client.get("/pages/Main/Dakar/history")
    assert [e["id"] for e in r.json()["revisions"]] == [2, 1]


def test_sparql_select(client):
    save(client, "Main", "Dakar", "[[Capital::Senegal]]")
    r = client.get("/sparql", params={
        "query": "SELECT * WHERE { ?s prop:Capital ?o }"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith(
        "application/sparql-results+json")
    doc = r.json()
    assert doc["head"]["vars"] == ["s", "o"]
    assert len(doc["results"]["bindings"]) == 1
    binding = doc["results"]["bindings"][0]
    assert binding["s"] == {"type": "uri", "value": W + "Dakar"}


def test_sparql_post_form(client):
    save(client, "Main", "Dakar", "[[Capital::Senegal]]")
    r = client.post("/sparql", data={
        "query": "SELECT * WHERE { ?s prop:Capital ?o }"})
    assert r.status_code == 200
    assert len(r.json()["results"]["bindings"]) == 1


def test_sparql_describe_ntriples(client):
    save(client, "Main", "Dakar", "[[Capital::Senegal]]")
    r = client.get("/sparql", params={
        "query": f"DESCRIBE <{W}Dakar>"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("application/n-triples")
    assert f"<{W}Dakar> <{W}prop/Capital> <{W}Senegal> ." in r.text


def test_sparql_parse_error_400(client):
    r = client.get("/sparql", params={"query": "SELECT * WHERE { broken"})
    assert r.status_code == 400


def test_sparql_update_403_and_no_mutation(client):
    save(client, "Main", "Dakar", "[[Capital::Senegal]]")
    before = client.get("/export", params={"graph": "data"}).text
    r = client.get("/sparql", params={
        "query": "INSERT { ?s a owl:Thing } WHERE { ?s ?p ?o }"})
    assert r.status_code == 403
    assert client.get("/export", params={"graph": "data"}).text == before


def test_export_graph(client):
    save(client, "Main", "Dakar", "[[Capital::Senegal]]")
    r = client.get("/export", params={"graph": "data"})
    assert r.status_code == 200
    lines = [l for l in r.text.splitlines() if l]
    assert len(lines) == 3
    r = client.get("/export", params={"graph": "urn:warehouse:data"})
    assert len([l for l in r.text.splitlines() if l]) == 3


def test_facets_endpoint(client):
    save(client, "Main", "Thies", "[[Category:City]] [[isPartOf::RegionA]]")
    save(client, "Main", "Mbour", "[[Category:City]] [[isPartOf::RegionA]]")
    save(client, "Main", "Kolda", "[[Category:City]] [[isPartOf::RegionB]]")
    r = client.get("/facets", params={"class": W + "category/City"})
    doc = r.json()
    assert len(doc["instances"]) == 3
    facet = {f["property"]: f for f in doc["facets"]}[W + "prop/isPartOf"]
    assert facet["values"][0]["count"] == 2
    # narrowed by a facet selection
    r = client.get("/facets", params=[
        ("class", W + "category/City"),
        ("filter", f"{W}prop/isPartOf <{W}RegionB>")])
    assert [i["value"] for i in r.json()["instances"]] == [W + "Kolda"]


def test_missing_parameters(client):
    assert client.get("/sparql").status_code == 400
    assert client.get("/facets").status_code == 400
    assert client.get("/export").status_code == 400


def test_temporality_document_over_fixture():
    from semwiki.rio import load_rdf
    from semwiki.store import DATA

    engine = WikiEngine()
    load_rdf(engine.store, fixture_text("gamou.nt"), "ntriples", DATA)
    local = TestClient(create_app(engine))
    r = local.get("/sparql", params={"query": fixture_text("temporality.rq")})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("application/n-triples")
    assert "ann1" in r.text and "ann2" in r.text and "ann3" in r.text
    engine.close()
