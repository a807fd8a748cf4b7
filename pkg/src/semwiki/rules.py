"""Forward-chaining materialization.

Rules are INSERT-WHERE updates applied repeatedly until a full round
adds nothing. Derived quads land in the derived-content graph only;
asserted warehouses are never touched. Every built-in rule guards its
head with FILTER NOT EXISTS, so a fact is never re-derived once present
anywhere in the union of graphs.

Termination: rule heads only recombine terms already present (no blank
node invention), so the set of derivable quads is finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError
from .sparql.ast import INSERT_WHERE, Group, Query, Var, pattern_vars
from .sparql.eval import execute_insert_where
from .sparql.parser import parse_query
from .store import INFERRED
from .terms import Iri


@dataclass
class Rule:
    name: str
    head: list  # triple-pattern templates
    body: Group

    def __post_init__(self):
        in_scope = set(pattern_vars(self.body))
        for s, p, o in self.head:
            for t in (s, p, o):
                if isinstance(t, Var) and t not in in_scope:
                    raise ValueError(
                        f"rule {self.name}: head variable ?{t.name} "
                        "does not occur in the body")

    def as_update(self) -> Query:
        return Query(INSERT_WHERE, template=self.head, where=self.body)


@dataclass
class RuleSet:
    rules: list[Rule]
    target_graph: Iri = INFERRED

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise ValueError("duplicate rule names in rule set")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


@dataclass
class FixpointReport:
    rounds: int
    added_per_rule: dict[str, int] = field(default_factory=dict)

    @property
    def total_added(self) -> int:
        return sum(self.added_per_rule.values())


def rule_from_text(name: str, text: str, extra_prefixes=None) -> Rule:
    query = parse_query(text, extra_prefixes=extra_prefixes, rule_mode=True)
    if query.form != INSERT_WHERE:
        raise ParseError(f"rule {name}: expected INSERT ... WHERE")
    return Rule(name, query.template, query.where)


def apply_rule_once(store, rule: Rule, target_graph: Iri) -> int:
    return execute_insert_where(store, rule.as_update(), target_graph)


def run_fixpoint(store, ruleset: RuleSet) -> FixpointReport:
    added_per_rule = {rule.name: 0 for rule in ruleset.rules}
    rounds = 0
    with store.write_locked():
        while True:
            rounds += 1
            round_added = 0
            for rule in ruleset.rules:
                n = apply_rule_once(store, rule, ruleset.target_graph)
                added_per_rule[rule.name] += n
                round_added += n
            if round_added == 0:
                break
    return FixpointReport(rounds, added_per_rule)


# ---------------------------------------------------------------------
# built-in rule sets

_RDFS_LITE = [
    ("sc-trans", """
        INSERT { ?c1 rdfs:subClassOf ?c3 }
        WHERE {
            ?c1 rdfs:subClassOf ?c2 .
            ?c2 rdfs:subClassOf ?c3 .
            FILTER NOT EXISTS { ?c1 rdfs:subClassOf ?c3 }
        }
    """),
    ("sc-type", """
        INSERT { ?x rdf:type ?c2 }
        WHERE {
            ?x rdf:type ?c1 .
            ?c1 rdfs:subClassOf ?c2 .
            FILTER NOT EXISTS { ?x rdf:type ?c2 }
        }
    """),
    ("sp-trans", """
        INSERT { ?p1 rdfs:subPropertyOf ?p3 }
        WHERE {
            ?p1 rdfs:subPropertyOf ?p2 .
            ?p2 rdfs:subPropertyOf ?p3 .
            FILTER NOT EXISTS { ?p1 rdfs:subPropertyOf ?p3 }
        }
    """),
    ("sp-use", """
        INSERT { ?x ?p2 ?y }
        WHERE {
            ?x ?p1 ?y .
            ?p1 rdfs:subPropertyOf ?p2 .
            FILTER NOT EXISTS { ?x ?p2 ?y }
        }
    """),
]


def rdfs_lite_ruleset() -> RuleSet:
    """Subclass/subproperty transitivity and their instance lifting."""
    return RuleSet([rule_from_text(name, text) for name, text in _RDFS_LITE])


# ---------------------------------------------------------------------
# rule catalog files

def parse_rule_catalog(text: str, extra_prefixes=None) -> list[Rule]:
    """One rule per block: a ``RULE <name>`` line followed by the
    INSERT/WHERE text, which the query machinery parses."""
    rules = []
    current_name = None
    current_lines: list[str] = []

    def flush(lineno):
        if current_name is None:
            return
        body = "\n".join(current_lines).strip()
        if not body:
            raise ParseError(f"rule {current_name!r} has no body", lineno)
        rules.append(rule_from_text(current_name, body, extra_prefixes))

    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if stripped.upper().startswith("RULE ") or stripped.upper() == "RULE":
            flush(lineno)
            current_name = stripped[4:].strip()
            if not current_name:
                raise ParseError("RULE line without a name", lineno)
            current_lines = []
        elif current_name is not None:
            current_lines.append(line)
        elif stripped and not stripped.startswith("#"):
            raise ParseError(f"content before first RULE: {stripped!r}", lineno)
    flush(len(text.split("\n")))
    return rules


def ruleset_from_catalog(text: str, target_graph: Iri = INFERRED,
                         extra_prefixes=None) -> RuleSet:
    return RuleSet(parse_rule_catalog(text, extra_prefixes), target_graph)
