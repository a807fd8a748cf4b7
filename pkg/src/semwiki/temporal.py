"""Temporal model: vocabulary loading, rule families, deictic dates and
the two temporal query archetypes.

Temporal annotations attach expressions to resources in three ways:
directly (huto:uri), through a reified triple (huto:triple with
rdf:subject/predicate/object), or to a whole named graph (huto:graph).
Expressions are dates or intervals; deictic dates (Today, Yesterday,
Tomorrow) are sub-concepts of the Date concept and only acquire
calendar fields once resolved against a discourse time.

Materialization interleaves rule fixpoints with a native resolution
pass that attaches a comparable ISO value to every fully resolved date,
because day/month/year fields can themselves appear through rules
(month normalization copies the month number from the typing class).
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from importlib import resources

from .errors import InvalidIntervalError
from .namespaces import (HUTO_BEGIN, HUTO_DATE, HUTO_DAY, HUTO_END,
                         HUTO_GRAPH, HUTO_HAS_TEMPORAL_EXP, HUTO_INTERVAL,
                         HUTO_ISO_DATE, HUTO_MONTH_PROP, HUTO_NUMBER,
                         HUTO_TEMPORAL_ANNOTATION, HUTO_TODAY, HUTO_TOMORROW,
                         HUTO_TRIPLE, HUTO_URI, HUTO_YEAR, HUTO_YESTERDAY,
                         RDF_OBJECT, RDF_SUBJECT, RDF_TYPE, XSD_DATE,
                         XSD_INTEGER)
from .rio import FORMAT_NTRIPLES, load_rdf
from .rules import FixpointReport, RuleSet, rule_from_text, ruleset_from_catalog, run_fixpoint
from .sparql.ast import ValuesBlock, Var
from .sparql.eval import evaluate_describe
from .sparql.parser import parse_query
from .store import HUTO, INFERRED
from .terms import Iri, Literal, Quad, Term, sort_key

_DEICTIC_OFFSETS = {
    Iri(HUTO_TODAY): 0,
    Iri(HUTO_YESTERDAY): -1,
    Iri(HUTO_TOMORROW): 1,
}


@dataclass(frozen=True)
class DiscourseTime:
    year: int
    month: int
    day: int
    tz_offset_minutes: int = 0

    def __post_init__(self):
        datetime.date(self.year, self.month, self.day)  # validates

    def date(self) -> datetime.date:
        return datetime.date(self.year, self.month, self.day)

    @classmethod
    def from_instant(cls, instant: datetime.datetime,
                     tz_offset_minutes: int = 0) -> "DiscourseTime":
        local = instant + datetime.timedelta(minutes=tz_offset_minutes)
        return cls(local.year, local.month, local.day, tz_offset_minutes)


def load_huto_vocabulary(store) -> int:
    """Bundled class hierarchy + month facts into the huto warehouse."""
    total = 0
    for name in ("huto_vocab.nt", "huto_months.nt"):
        text = resources.files("semwiki.data").joinpath(name).read_text()
        total += load_rdf(store, text, FORMAT_NTRIPLES, HUTO)
    return total


_MONTH_NORMALIZATION = """
INSERT { ?x huto:number ?m ; huto:numberOfDay ?d ; huto:even ?e }
WHERE {
    ?x rdf:type ?o
    ?o rdfs:subClassOf huto:Month ;
    huto:number ?m ;
    huto:even ?e .
    OPTIONAL { ?x rdf:type/huto:numberOfDay ?d }
}
"""


def normalization_ruleset() -> RuleSet:
    """Month normalization: instances typed by a month class receive the
    class's number, parity and (when declared) day count."""
    return RuleSet([rule_from_text("month-normalization", _MONTH_NORMALIZATION)])


def temporal_ruleset() -> RuleSet:
    """The before/after catalog (22 rules); the bundled catalog file is
    the source of truth."""
    text = resources.files("semwiki.data").joinpath("temporal.rules").read_text()
    return ruleset_from_catalog(text)


# ---------------------------------------------------------------------
# deictic resolution and date seeding

def _int_literal(value: int) -> Literal:
    return Literal(str(value), datatype=XSD_INTEGER)


def _has_any(store, node, preds) -> bool:
    return any(store.match(node, Iri(p), None) for p in preds)


def resolve_deictic(store, discourse: DiscourseTime) -> int:
    """Attach calendar fields of the effective date to every unresolved
    deictic node. Existing resolutions are kept."""
    added = 0
    with store.write_locked():
        for cls, offset in _DEICTIC_OFFSETS.items():
            effective = discourse.date() + datetime.timedelta(days=offset)
            for quad in store.match(None, Iri(RDF_TYPE), cls):
                node = quad.subject
                if _has_any(store, node, (HUTO_YEAR, HUTO_MONTH_PROP, HUTO_DAY)):
                    continue
                for prop, value in ((HUTO_YEAR, effective.year),
                                    (HUTO_MONTH_PROP, effective.month),
                                    (HUTO_DAY, effective.day)):
                    if store.insert(Quad(node, Iri(prop), _int_literal(value),
                                         INFERRED)):
                        added += 1
    return added


def _int_value(store, node, *preds) -> int | None:
    for p in preds:
        values = sorted(q.object.lexical for q in store.match(node, Iri(p), None)
                        if isinstance(q.object, Literal)
                        and q.object.datatype == XSD_INTEGER)
        if values:
            return int(values[0])
    return None


def resolved_date(store, node) -> datetime.date | None:
    """Calendar date of a date node, when fully resolved."""
    for q in store.match(node, Iri(HUTO_ISO_DATE), None):
        if isinstance(q.object, Literal) and q.object.datatype == XSD_DATE:
            try:
                return datetime.date.fromisoformat(q.object.lexical)
            except ValueError:
                continue
    year = _int_value(store, node, HUTO_YEAR)
    month = _int_value(store, node, HUTO_MONTH_PROP, HUTO_NUMBER)
    day = _int_value(store, node, HUTO_DAY)
    if year is None or month is None or day is None:
        return None
    try:
        return datetime.date(year, month, day)
    except ValueError:
        return None


def seed_resolved_dates(store) -> int:
    """Attach a comparable ISO value to every fully resolved date node
    missing one; feeds the date ordering seed rules."""
    added = 0
    with store.write_locked():
        for quad in store.match(None, Iri(RDF_TYPE), Iri(HUTO_DATE)):
            node = quad.subject
            if store.match(node, Iri(HUTO_ISO_DATE), None):
                continue
            date = resolved_date(store, node)
            if date is None:
                continue
            lit = Literal(date.isoformat(), datatype=XSD_DATE)
            if store.insert(Quad(node, Iri(HUTO_ISO_DATE), lit, INFERRED)):
                added += 1
    return added


def materialize(store, ruleset: RuleSet, discourse: DiscourseTime | None = None) -> FixpointReport:
    """Fixpoint interleaved with deictic resolution and date seeding
    until nothing moves."""
    added_per_rule = {rule.name: 0 for rule in ruleset.rules}
    deictic_added = 0
    seed_added = 0
    rounds = 0
    with store.write_locked():
        if discourse is not None:
            deictic_added = resolve_deictic(store, discourse)
        while True:
            report = run_fixpoint(store, ruleset)
            rounds += report.rounds
            for name, n in report.added_per_rule.items():
                added_per_rule[name] += n
            moved = seed_resolved_dates(store)
            if discourse is not None:
                moved += resolve_deictic(store, discourse)
            seed_added += moved
            if moved == 0:
                break
    if discourse is not None:
        added_per_rule["deictic-resolution"] = deictic_added
    added_per_rule["date-resolution"] = seed_added
    return FixpointReport(rounds, added_per_rule)


# ---------------------------------------------------------------------
# temporal queries

_TEMPORALITY_QUERY = """
DESCRIBE ?x
WHERE {
    { ?x huto:uri ?resource } UNION
    { ?x huto:triple/(rdf:subject|rdf:object) ?resource } UNION
    { ?x huto:graph ?g .
        graph ?g {
            { ?resource ?p ?o } UNION
            { ?s ?p ?resource }
        }
    }
    FILTER NOT EXISTS { ?j ?k ?x }
}
"""

def temporality_of(store, resource: Term):
    """Concise bounded descriptions of the top-level annotations giving
    the resource its temporality, across all three attachment modes."""
    ast = parse_query(_TEMPORALITY_QUERY)
    ast.values = ValuesBlock(Var("resource"), [resource])
    return evaluate_describe(store, ast)


def _expression_interval(store, expr) -> tuple[datetime.date, datetime.date] | None:
    if store.match(expr, Iri(RDF_TYPE), Iri(HUTO_INTERVAL)):
        begins = [q.object for q in store.match(expr, Iri(HUTO_BEGIN), None)]
        ends = [q.object for q in store.match(expr, Iri(HUTO_END), None)]
        if not begins or not ends:
            return None
        begin = resolved_date(store, begins[0])
        end = resolved_date(store, ends[0])
        if begin is None or end is None:
            return None
        return (begin, end) if begin <= end else (end, begin)
    date = resolved_date(store, expr)
    if date is None:
        return None
    return (date, date)


def _attached_resources(store, annotation) -> list[Term]:
    out = []
    for q in store.match(annotation, Iri(HUTO_URI), None):
        out.append(q.object)
    for q in store.match(annotation, Iri(HUTO_TRIPLE), None):
        for p in (RDF_SUBJECT, RDF_OBJECT):
            for t in store.match(q.object, Iri(p), None):
                out.append(t.object)
    for q in store.match(annotation, Iri(HUTO_GRAPH), None):
        graph = q.object
        if not isinstance(graph, Iri):
            continue
        for t in store.match(g=graph):
            if isinstance(t.subject, Iri):
                out.append(t.subject)
            if isinstance(t.object, Iri):
                out.append(t.object)
    return out


def resources_in_interval(store, begin: datetime.date,
                          end: datetime.date) -> list[Term]:
    """Resources whose annotations carry an expression intersecting the
    closed interval [begin, end]. Unresolved expressions are skipped."""
    if begin > end:
        raise InvalidIntervalError(f"begin {begin} is after end {end}")
    out: dict[Term, None] = {}
    with store.read_locked():
        for quad in store.match(None, Iri(RDF_TYPE),
                                Iri(HUTO_TEMPORAL_ANNOTATION)):
            annotation = quad.subject
            hit = False
            for q in store.match(annotation, Iri(HUTO_HAS_TEMPORAL_EXP), None):
                interval = _expression_interval(store, q.object)
                if interval is None:
                    continue
                if interval[0] <= end and begin <= interval[1]:
                    hit = True
                    break
            if hit:
                for r in _attached_resources(store, annotation):
                    out.setdefault(r)
    return sorted(out, key=sort_key)
