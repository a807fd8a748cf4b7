"""Inline annotation markup: extraction and compilation to OWL-typed RDF.

Annotation grammar inside page text:

    [[Property::Value]]          relation or attribute
    [[Property::Value|label]]    idem, with display label
    [[Category:Name]]            category membership (single colon)
    [[Category::Name]]           subclass form (double colon)

``[[Target]]`` / ``[[Target|label]]`` without a colon form is an
ordinary wiki link: it carries no semantics and stays verbatim in the
display text. Anything else between brackets is malformed and passes
through as raw text with a diagnostic.

Compilation follows the standard wiki-to-OWL mapping: article pages are
named individuals, relations become object properties, attributes
datatype properties, categories classes, and the double-colon form on a
Category-namespace page a subClassOf axiom. Whether a property is a
relation or an attribute is decided by the shape of its value at first
use (number- or date-shaped values make it an attribute) and pinned by
the emitted declaration; later conflicting use is a hard error.

Spans are character offsets into the wikitext string.
"""

from __future__ import annotations

import datetime
import re
from dataclasses import dataclass, field
from urllib.parse import quote

from .errors import PropertyKindConflictError, SemWikiError
from .namespaces import (OWL_ANNOTATION_PROPERTY, OWL_DATATYPE_PROPERTY,
                         OWL_EQUIVALENT_PROPERTY, OWL_NAMED_INDIVIDUAL,
                         OWL_OBJECT_PROPERTY, RDF_TYPE, RDFS_CLASS,
                         RDFS_SUBCLASSOF, WELL_KNOWN_PREFIXES, WIKI_NS,
                         XSD_DATE, XSD_DECIMAL, XSD_INTEGER, XSD_STRING)
from .store import DATA
from .terms import Iri, Literal, Quad

NAMESPACES = ("Main", "Category", "Property")

RELATION = "relation"
ATTRIBUTE = "attribute"
CATEGORY_ASSERTION = "categoryAssertion"
SUBCLASS_ASSERTION = "subclassAssertion"

# reserved documentation properties compiled as annotation properties
ANNOTATION_PROPERTIES = {"HasComment"}
# reserved vocabulary-import property (Property namespace only)
IMPORTED_FROM = "ImportedFrom"


class VocabularyImportError(SemWikiError):
    pass


@dataclass(frozen=True)
class PageRef:
    namespace: str
    title: str

    def __post_init__(self):
        if self.namespace not in NAMESPACES:
            raise ValueError(f"unknown namespace {self.namespace!r}")
        if not self.title:
            raise ValueError("page title must be non-empty")


def _encode_title(title: str) -> str:
    return quote(title.strip().replace(" ", "_"), safe="")


def page_iri(page: PageRef, base_iri: str = WIKI_NS) -> Iri:
    path = {"Main": "", "Category": "category/", "Property": "prop/"}[page.namespace]
    return Iri(base_iri + path + _encode_title(page.title))


def property_iri(name: str, base_iri: str = WIKI_NS) -> Iri:
    return Iri(base_iri + "prop/" + _encode_title(name))


def category_iri(name: str, base_iri: str = WIKI_NS) -> Iri:
    return Iri(base_iri + "category/" + _encode_title(name))


@dataclass(frozen=True)
class AnnotationTag:
    kind: str
    property: str | None
    value: str
    display_label: str | None
    source_span: tuple[int, int]

    @property
    def display_form(self) -> str:
        if self.kind in (CATEGORY_ASSERTION, SUBCLASS_ASSERTION):
            return ""  # category tags render outside the prose
        return self.display_label if self.display_label is not None else self.value


@dataclass(frozen=True)
class Diagnostic:
    message: str
    span: tuple[int, int]


@dataclass
class ParseOutcome:
    tags: list[AnnotationTag] = field(default_factory=list)
    display_text: str = ""
    diagnostics: list[Diagnostic] = field(default_factory=list)


_BAD_NAME = re.compile(r"[\[\]|{}<>\n]")


def parse_annotations(page: PageRef, wikitext: str) -> ParseOutcome:
    """Total function: problems become diagnostics, never exceptions."""
    outcome = ParseOutcome()
    out = []
    pos = 0
    n = len(wikitext)
    while pos < n:
        start = wikitext.find("[[", pos)
        if start < 0:
            out.append(wikitext[pos:])
            break
        out.append(wikitext[pos:start])
        end = wikitext.find("]]", start + 2)
        if end < 0:
            outcome.diagnostics.append(Diagnostic(
                "unclosed '[['", (start, n)))
            out.append(wikitext[start:])
            break
        inner = wikitext[start + 2:end]
        nested = inner.find("[[")
        if nested >= 0:
            cut = start + 2 + nested
            outcome.diagnostics.append(Diagnostic(
                "nested '[[' treated as text", (start, cut)))
            out.append(wikitext[start:cut])
            pos = cut
            continue
        span = (start, end + 2)
        tag, display, diag = _classify(page, inner, span)
        if diag is not None:
            outcome.diagnostics.append(diag)
            out.append(wikitext[start:end + 2])
        else:
            if tag is not None:
                outcome.tags.append(tag)
            out.append(display)
        pos = end + 2
    outcome.display_text = "".join(out)
    return outcome


def _classify(page, inner, span):
    """-> (tag | None, display text, diagnostic | None)"""
    if "::" in inner:
        name, _, rest = inner.partition("::")
        name = name.strip()
        value, _, label = rest.partition("|")
        value = value.strip()
        label = label.strip() or None
        if not name or _BAD_NAME.search(name):
            return None, "", Diagnostic(f"malformed annotation name {name!r}", span)
        if not value:
            return None, "", Diagnostic("empty annotation value", span)
        if name == "Category":
            kind = SUBCLASS_ASSERTION if page.namespace == "Category" \
                else CATEGORY_ASSERTION
            return (AnnotationTag(kind, None, value, label, span), "", None)
        # relation vs attribute is resolved at compile time; the parsed
        # tag carries the relation kind as a placeholder
        tag = AnnotationTag(RELATION, name, value, label, span)
        return tag, tag.display_form, None
    if inner.startswith("Category:"):
        value = inner[len("Category:"):].strip()
        if not value:
            return None, "", Diagnostic("empty category name", span)
        kind = SUBCLASS_ASSERTION if page.namespace == "Category" \
            else CATEGORY_ASSERTION
        return (AnnotationTag(kind, None, value, None, span), "", None)
    # a plain wiki link carries no semantics; it stays verbatim in the
    # display text (rendering links is the UI's concern)
    return None, f"[[{inner}]]", None


_INTEGER_RE = re.compile(r"^[+-]?\d+$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)$")
_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def infer_literal_type(raw: str) -> Literal:
    if _INTEGER_RE.match(raw):
        return Literal(raw, datatype=XSD_INTEGER)
    if _DECIMAL_RE.match(raw):
        return Literal(raw, datatype=XSD_DECIMAL)
    if _DATE_RE.match(raw):
        year, month, day = map(int, raw.split("-"))
        try:
            datetime.date(year, month, day)
        except ValueError:
            return Literal(raw)
        return Literal(raw, datatype=XSD_DATE)
    return Literal(raw)


def _is_literal_shaped(value: str) -> bool:
    return infer_literal_type(value).datatype != XSD_STRING


def _declared_kind(store, prop: Iri, batch: dict):
    kind = batch.get(prop.value)
    if kind is not None:
        return kind
    if store.match(prop, Iri(RDF_TYPE), Iri(OWL_OBJECT_PROPERTY), DATA):
        return OWL_OBJECT_PROPERTY
    if store.match(prop, Iri(RDF_TYPE), Iri(OWL_DATATYPE_PROPERTY), DATA):
        return OWL_DATATYPE_PROPERTY
    return None


def _alias_for(store, prop: Iri, batch_aliases: dict) -> Iri:
    alias = batch_aliases.get(prop.value)
    if alias is not None:
        return alias
    hits = store.match(prop, Iri(OWL_EQUIVALENT_PROPERTY), None, DATA)
    if hits:
        return hits[0].object
    return prop


def _resolve_prefixed(value: str) -> Iri:
    prefix, sep, local = value.partition(":")
    if sep and prefix in WELL_KNOWN_PREFIXES:
        return Iri(WELL_KNOWN_PREFIXES[prefix] + local)
    if value.startswith(("http://", "https://", "urn:")):
        return Iri(value)  # full IRI spelled out
    raise VocabularyImportError(
        f"cannot resolve vocabulary reference {value!r}")


def compile_tags(page: PageRef, tags, store, base_iri: str = WIKI_NS) -> list[Quad]:
    """Quads for one page's tags, in the data warehouse.

    Raises PropertyKindConflictError when a tag's value shape
    contradicts the property's pinned declaration; the caller is
    expected to reject the whole save.
    """
    quads: dict[Quad, None] = {}

    def emit(s, p, o):
        quads.setdefault(Quad(s, p, o, DATA))

    subject = page_iri(page, base_iri)
    if page.namespace == "Main":
        emit(subject, Iri(RDF_TYPE), Iri(OWL_NAMED_INDIVIDUAL))

    batch_kinds: dict[str, str] = {}
    batch_aliases: dict[str, Iri] = {}

    for tag in tags:
        if tag.kind == CATEGORY_ASSERTION:
            target = category_iri(tag.value, base_iri)
            emit(subject, Iri(RDF_TYPE), target)
            emit(target, Iri(RDF_TYPE), Iri(RDFS_CLASS))
            continue
        if tag.kind == SUBCLASS_ASSERTION:
            emit(subject, Iri(RDFS_SUBCLASSOF), category_iri(tag.value, base_iri))
            continue

        name = tag.property
        if name == IMPORTED_FROM and page.namespace == "Property":
            external = _resolve_prefixed(tag.value)
            local = property_iri(page.title, base_iri)
            emit(local, Iri(OWL_EQUIVALENT_PROPERTY), external)
            batch_aliases[local.value] = external
            continue
        if name in ANNOTATION_PROPERTIES:
            prop = property_iri(name, base_iri)
            emit(subject, prop, Literal(tag.value))
            emit(prop, Iri(RDF_TYPE), Iri(OWL_ANNOTATION_PROPERTY))
            continue

        prop = _alias_for(store, property_iri(name, base_iri), batch_aliases)
        natural = OWL_DATATYPE_PROPERTY if _is_literal_shaped(tag.value) \
            else OWL_OBJECT_PROPERTY
        declared = _declared_kind(store, prop, batch_kinds)
        if declared is not None and declared != natural:
            raise PropertyKindConflictError(
                prop.value,
                declared.rsplit("#", 1)[-1],
                natural.rsplit("#", 1)[-1])
        batch_kinds[prop.value] = natural
        if natural == OWL_OBJECT_PROPERTY:
            target = page_iri(PageRef("Main", tag.value), base_iri)
            emit(subject, prop, target)
            emit(prop, Iri(RDF_TYPE), Iri(OWL_OBJECT_PROPERTY))
        else:
            emit(subject, prop, infer_literal_type(tag.value))
            emit(prop, Iri(RDF_TYPE), Iri(OWL_DATATYPE_PROPERTY))

    return list(quads)
