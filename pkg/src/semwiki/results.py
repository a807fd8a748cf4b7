"""SPARQL results JSON: encoding solution sets and decoding endpoint
responses (the standard ``application/sparql-results+json`` layout)."""

from __future__ import annotations

import json

from .errors import MalformedResponseError
from .namespaces import XSD_STRING
from .sparql.ast import SolutionSet, Var
from .terms import Blank, Iri, Literal, Term


def term_to_json(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, Blank):
        return {"type": "bnode", "value": term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.lang:
        out["xml:lang"] = term.lang
    elif term.datatype != XSD_STRING:
        out["datatype"] = term.datatype
    return out


def term_from_json(obj) -> Term:
    try:
        kind = obj["type"]
        value = obj["value"]
    except (TypeError, KeyError) as exc:
        raise MalformedResponseError(f"bad term object: {obj!r}") from exc
    if kind == "uri":
        try:
            return Iri(value)
        except ValueError as exc:
            raise MalformedResponseError(str(exc)) from exc
    if kind == "bnode":
        return Blank(value)
    if kind in ("literal", "typed-literal"):
        lang = obj.get("xml:lang")
        datatype = obj.get("datatype")
        if lang:
            return Literal(value, lang=lang)
        if datatype:
            return Literal(value, datatype=datatype)
        return Literal(value)
    raise MalformedResponseError(f"unknown term type {kind!r}")


def solutions_to_json(solutions: SolutionSet) -> str:
    bindings = []
    for row in solutions.rows:
        bindings.append({var.name: term_to_json(term)
                         for var, term in row.items()})
    doc = {
        "head": {"vars": [v.name for v in solutions.variables]},
        "results": {"bindings": bindings},
    }
    return json.dumps(doc, indent=2)


def solutions_from_json(body: str | bytes) -> SolutionSet:
    try:
        doc = json.loads(body)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedResponseError(f"response is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedResponseError("response is not a JSON object")
    try:
        names = doc["head"]["vars"]
        bindings = doc["results"]["bindings"]
    except (TypeError, KeyError) as exc:
        raise MalformedResponseError("missing head/results sections") from exc
    if not isinstance(names, list) or not isinstance(bindings, list):
        raise MalformedResponseError("malformed head/results sections")
    variables = [Var(str(n)) for n in names]
    rows = []
    for binding in bindings:
        if not isinstance(binding, dict):
            raise MalformedResponseError("binding is not an object")
        rows.append({Var(name): term_from_json(obj)
                     for name, obj in binding.items()})
    return SolutionSet(variables, rows)
