import datetime
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semwiki.annotations import (ATTRIBUTE, CATEGORY_ASSERTION, RELATION,
                                 SUBCLASS_ASSERTION, PageRef,
                                 VocabularyImportError, compile_tags,
                                 infer_literal_type, page_iri,
                                 parse_annotations)
from semwiki.errors import PropertyKindConflictError
from semwiki.namespaces import (HUTO_BEFORE, OWL_ANNOTATION_PROPERTY,
                                OWL_DATATYPE_PROPERTY, OWL_EQUIVALENT_PROPERTY,
                                OWL_NAMED_INDIVIDUAL, OWL_OBJECT_PROPERTY,
                                RDF_TYPE, RDFS_CLASS, RDFS_SUBCLASSOF,
                                XSD_DATE, XSD_DECIMAL, XSD_INTEGER, XSD_STRING)
from semwiki.store import DATA, init_store
from semwiki.terms import Iri, Literal

DAKAR = PageRef("Main", "Dakar")
W = "http://example.org/wiki/"


def triples(quads):
    return {(q.subject.value, q.predicate.value,
             q.object.value if isinstance(q.object, Iri) else q.object)
            for q in quads}


# -- parsing -------------------------------------------------------------

def test_relation_tag():
    out = parse_annotations(DAKAR, "[[Capital::Senegal]]")
    assert len(out.tags) == 1
    tag = out.tags[0]
    assert tag.property == "Capital"
    assert tag.value == "Senegal"
    assert out.display_text == "Senegal"
    assert not out.diagnostics


def test_attribute_tag():
    out = parse_annotations(DAKAR, "[[Population::1056009]]")
    assert [(t.property, t.value) for t in out.tags] == [("Population", "1056009")]


def test_no_brackets_is_identity():
    text = "Dakar is the capital of Senegal."
    out = parse_annotations(DAKAR, text)
    assert out.tags == []
    assert out.display_text == text


def test_category_double_colon_on_category_page():
    page = PageRef("Category", "City")
    out = parse_annotations(page, "[[Category::Locality]]")
    assert out.tags[0].kind == SUBCLASS_ASSERTION
    assert out.tags[0].value == "Locality"


def test_category_single_colon_on_article():
    out = parse_annotations(DAKAR, "x [[Category:City]] y")
    assert out.tags[0].kind == CATEGORY_ASSERTION
    assert out.display_text == "x  y"  # category tags render outside prose


def test_category_double_colon_on_article_is_membership():
    out = parse_annotations(DAKAR, "[[Category::Locality]]")
    assert out.tags[0].kind == CATEGORY_ASSERTION


def test_display_label():
    out = parse_annotations(DAKAR, "[[Capital::Senegal|the country]]")
    assert out.tags[0].display_label == "the country"
    assert out.display_text == "the country"


def test_plain_link_is_not_semantic():
    out = parse_annotations(DAKAR, "see [[Senegal]] and [[Thies|Thiès]]")
    assert out.tags == []
    assert out.display_text == "see [[Senegal]] and [[Thies|Thiès]]"
    assert not out.diagnostics


def test_malformed_passthrough():
    out = parse_annotations(DAKAR, "a [[::broken]] b [[unclosed")
    assert out.tags == []
    assert "[[::broken]]" in out.display_text
    assert "[[unclosed" in out.display_text
    assert len(out.diagnostics) == 2


def test_span_soundness_reconstruction():
    text = "intro [[Capital::Senegal]] middle [[Population::1056009|1M]] end"
    out = parse_annotations(DAKAR, text)
    rebuilt = []
    pos = 0
    for tag in out.tags:
        start, end = tag.source_span
        assert text[start:start + 2] == "[["
        rebuilt.append(text[pos:start])
        rebuilt.append(tag.display_form)
        pos = end
    rebuilt.append(text[pos:])
    assert "".join(rebuilt) == out.display_text


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(
    ["plain ", "[[P::v1]]", "[[Category:C]]", "[[Q::2|two]]", " tail",
     "[[link]]", "é—"]), max_size=8))
def test_span_soundness_property(parts):
    text = "".join(parts)
    out = parse_annotations(DAKAR, text)
    rebuilt = []
    pos = 0
    for tag in out.tags:
        start, end = tag.source_span
        rebuilt.append(text[pos:start])
        rebuilt.append(tag.display_form)
        pos = end
    rebuilt.append(text[pos:])
    assert "".join(rebuilt) == out.display_text


# -- literal typing ------------------------------------------------------

def test_literal_types():
    assert infer_literal_type("1056009").datatype == XSD_INTEGER
    assert infer_literal_type("-12").datatype == XSD_INTEGER
    assert infer_literal_type("3.14").datatype == XSD_DECIMAL
    assert infer_literal_type("hello").datatype == XSD_STRING
    assert infer_literal_type("2014-01-14").datatype == XSD_DATE


_ISO = re.compile(r"^\d{4}-\d{2}-\d{2}$")


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="0123456789-", min_size=1, max_size=12))
def test_date_detection_matches_iso_oracle(raw):
    def oracle(value):  # ISO-8601 calendar date grammar
        if not _ISO.match(value):
            return False
        try:
            datetime.date(*map(int, value.split("-")))
            return True
        except ValueError:
            return False

    got = infer_literal_type(raw).datatype == XSD_DATE
    assert got == oracle(raw)


# -- compilation --------------------------------------------------------

def compile_text(page, text, store=None):
    store = store or init_store()
    out = parse_annotations(page, text)
    return compile_tags(page, out.tags, store)


def test_compile_relation_mapping():
    quads = compile_text(DAKAR, "[[Capital::Senegal]]")
    assert triples(quads) == {
        (W + "Dakar", RDF_TYPE, OWL_NAMED_INDIVIDUAL),
        (W + "Dakar", W + "prop/Capital", W + "Senegal"),
        (W + "prop/Capital", RDF_TYPE, OWL_OBJECT_PROPERTY),
    }
    assert all(q.graph == DATA for q in quads)


def test_compile_attribute_mapping():
    quads = compile_text(DAKAR, "[[Population::1056009]]")
    assert (W + "Dakar", W + "prop/Population",
            Literal("1056009", datatype=XSD_INTEGER)) in triples(quads)
    assert (W + "prop/Population", RDF_TYPE, OWL_DATATYPE_PROPERTY) in triples(quads)


def test_compile_category_membership_mapping():
    quads = compile_text(DAKAR, "[[Category:City]]")
    assert (W + "Dakar", RDF_TYPE, W + "category/City") in triples(quads)
    assert (W + "category/City", RDF_TYPE, RDFS_CLASS) in triples(quads)


def test_compile_subclass_mapping():
    page = PageRef("Category", "City")
    quads = compile_text(page, "[[Category::Locality]]")
    assert triples(quads) == {
        (W + "category/City", RDFS_SUBCLASSOF, W + "category/Locality"),
    }


def test_empty_article_page_gets_one_typing_quad():
    quads = compile_text(DAKAR, "just prose")
    assert triples(quads) == {(W + "Dakar", RDF_TYPE, OWL_NAMED_INDIVIDUAL)}


def test_typing_totality():
    quads = compile_text(DAKAR, "[[Capital::Senegal]] [[Population::1056009]] "
                                "[[Capital::Gambia]]")
    individual_typings = [q for q in quads
                          if q.predicate.value == RDF_TYPE
                          and q.object == Iri(OWL_NAMED_INDIVIDUAL)]
    assert len(individual_typings) == 1
    for prop in ("Capital", "Population"):
        decls = [q for q in quads if q.subject.value == W + "prop/" + prop
                 and q.predicate.value == RDF_TYPE
                 and q.object.value.startswith("http://www.w3.org/2002/07/owl#")]
        assert len(decls) == 1


def test_compile_is_deterministic():
    runs = {tuple(map(repr, compile_text(DAKAR, "[[A::B]] [[C::1]] [[Category:X]]")))
            for _ in range(5)}
    assert len(runs) == 1


def test_kind_conflict_within_page():
    with pytest.raises(PropertyKindConflictError):
        compile_text(DAKAR, "[[Size::Large]] [[Size::12]]")


def test_kind_conflict_against_store_declaration():
    store = init_store()
    for q in compile_text(DAKAR, "[[Population::1056009]]", store):
        store.insert(q)
    with pytest.raises(PropertyKindConflictError):
        compile_text(PageRef("Main", "Thies"), "[[Population::unknown]]", store)


def test_title_encoding():
    page = PageRef("Main", "Saint Louis")
    assert page_iri(page).value == W + "Saint_Louis"
    quads = compile_text(page, "[[PartOf::Région de Saint Louis]]")
    targets = [q.object.value for q in quads
               if q.predicate.value == W + "prop/PartOf"]
    assert targets == [W + "R%C3%A9gion_de_Saint_Louis"]


def test_annotation_property():
    quads = compile_text(DAKAR, "[[HasComment::needs review]]")
    assert (W + "prop/HasComment", RDF_TYPE, OWL_ANNOTATION_PROPERTY) in triples(quads)
    assert (W + "Dakar", W + "prop/HasComment", Literal("needs review")) in triples(quads)


def test_imported_from_aliases_property():
    store = init_store()
    page = PageRef("Property", "Precedes")
    quads = compile_text(page, "[[ImportedFrom::huto:before]]", store)
    assert (W + "prop/Precedes", OWL_EQUIVALENT_PROPERTY, HUTO_BEFORE) in triples(quads)
    for q in quads:
        store.insert(q)
    # subsequent use of the property emits the external IRI directly
    quads = compile_text(DAKAR, "[[Precedes::Thies]]", store)
    assert (W + "Dakar", HUTO_BEFORE, W + "Thies") in triples(quads)
    assert (HUTO_BEFORE, RDF_TYPE, OWL_OBJECT_PROPERTY) in triples(quads)


def test_imported_from_unresolvable():
    page = PageRef("Property", "Broken")
    with pytest.raises(VocabularyImportError):
        compile_text(page, "[[ImportedFrom::junkprefix:foo]]")


def test_page_ref_validation():
    with pytest.raises(ValueError):
        PageRef("Nope", "X")
    with pytest.raises(ValueError):
        PageRef("Main", "")
