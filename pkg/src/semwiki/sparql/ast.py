"""Query AST for the SPARQL subset.

Pattern nodes form a small algebra: basic graph patterns, groups,
OPTIONAL, UNION, FILTER NOT EXISTS, GRAPH scoping, and (in rule
catalogs only) a two-variable comparison filter. Property paths are
limited to sequence and alternation over forward IRI steps and may only
occupy the predicate position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..terms import Iri, Term

SELECT = "select"
CONSTRUCT = "construct"
DESCRIBE = "describe"
INSERT_WHERE = "insertWhere"


@dataclass(frozen=True)
class Var:
    name: str

    def __hash__(self):
        return hash(self.name) ^ 0x56AB

    def __repr__(self):
        return f"?{self.name}"


@dataclass(frozen=True)
class PathSeq:
    steps: tuple

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.steps)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "/".join(map(repr, self.steps))


@dataclass(frozen=True)
class PathAlt:
    options: tuple

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.options)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "(" + "|".join(map(repr, self.options)) + ")"


Path = Iri | PathSeq | PathAlt

# (subject, predicate, object); predicate may be a Var or a Path
TriplePattern = tuple


@dataclass
class Bgp:
    patterns: list[TriplePattern]


@dataclass
class Group:
    elements: list


@dataclass
class Optional_:
    child: Group


@dataclass
class Union:
    left: object
    right: object


@dataclass
class FilterNotExists:
    child: Group


@dataclass
class GraphScope:
    target: object  # Iri or Var
    child: Group


@dataclass
class Compare:
    """FILTER (?a < ?b) — rule-catalog extension, not query surface."""
    left: Var
    op: str  # '<' or '>'
    right: Var


@dataclass
class ValuesBlock:
    var: Var
    terms: list[Term]


@dataclass
class Query:
    form: str
    prefixes: dict[str, str] = field(default_factory=dict)
    projection: list[Var] | None = None  # None means SELECT *
    template: list[TriplePattern] = field(default_factory=list)
    describe_targets: list = field(default_factory=list)
    where: Group = field(default_factory=lambda: Group([]))
    values: ValuesBlock | None = None


@dataclass
class SolutionSet:
    variables: list[Var]
    rows: list[dict]

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> list:
        v = Var(name)
        return [row.get(v) for row in self.rows]


def pattern_vars(node) -> list[Var]:
    """All variables in a pattern tree, in first-appearance order."""
    seen: dict[Var, None] = {}

    def walk_term(t):
        if isinstance(t, Var):
            seen.setdefault(t)

    def walk(n):
        if isinstance(n, Bgp):
            for s, p, o in n.patterns:
                walk_term(s)
                if isinstance(p, Var):
                    seen.setdefault(p)
                walk_term(o)
        elif isinstance(n, Group):
            for el in n.elements:
                walk(el)
        elif isinstance(n, Optional_):
            walk(n.child)
        elif isinstance(n, Union):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, FilterNotExists):
            walk(n.child)
        elif isinstance(n, GraphScope):
            walk_term(n.target)
            walk(n.child)
        elif isinstance(n, Compare):
            seen.setdefault(n.left)
            seen.setdefault(n.right)

    walk(node)
    return list(seen)
