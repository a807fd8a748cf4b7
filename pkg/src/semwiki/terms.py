"""RDF terms and quads.

Terms are immutable values with structural equality: IRIs, blank nodes
and literals. A quad is a triple plus the named graph it belongs to.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .namespaces import XSD_STRING

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


class TermError(ValueError):
    """Raised for structurally invalid terms or quads."""


@dataclass(frozen=True, order=False)
class Iri:
    value: str

    def __post_init__(self):
        if not _SCHEME_RE.match(self.value):
            raise TermError(f"IRI is not absolute: {self.value!r}")

    def __hash__(self):  # string hashes are cached by the runtime
        return hash(self.value)

    def __repr__(self):
        return f"<{self.value}>"


@dataclass(frozen=True, order=False)
class Blank:
    label: str

    def __post_init__(self):
        if not self.label:
            raise TermError("blank node label must be non-empty")

    def __hash__(self):
        return ~hash(self.label)

    def __repr__(self):
        return f"_:{self.label}"


@dataclass(frozen=True, order=False)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: str | None = None

    def __post_init__(self):
        if self.lang is not None and self.datatype != XSD_STRING:
            raise TermError("literal cannot carry both a language tag "
                            "and a non-string datatype")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.lexical, self.datatype, self.lang))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        if self.lang:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype != XSD_STRING:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


Term = Iri | Blank | Literal

_KIND_RANK = {Iri: 0, Blank: 1, Literal: 2}


def sort_key(term: Term) -> tuple:
    """Total order over terms: IRIs, then blanks, then literals."""
    if isinstance(term, Iri):
        return (0, term.value)
    if isinstance(term, Blank):
        return (1, term.label)
    return (2, term.lexical, term.datatype, term.lang or "")


@dataclass(frozen=True)
class Quad:
    subject: Term
    predicate: Term
    object: Term
    graph: Term

    def __post_init__(self):
        if not isinstance(self.predicate, Iri):
            raise TermError(f"predicate must be an IRI: {self.predicate!r}")
        if isinstance(self.subject, Literal):
            raise TermError(f"subject must not be a literal: {self.subject!r}")
        if not isinstance(self.graph, Iri):
            raise TermError(f"graph must be an IRI: {self.graph!r}")

    def triple(self) -> tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)

    def __repr__(self):
        return (f"({self.subject!r} {self.predicate!r} "
                f"{self.object!r} @{self.graph.value})")


def triple_sort_key(t: tuple[Term, Term, Term]) -> tuple:
    return (sort_key(t[0]), sort_key(t[1]), sort_key(t[2]))
