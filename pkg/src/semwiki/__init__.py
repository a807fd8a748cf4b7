"""Semantic wiki engine: annotated pages compiled to RDF warehouses,
a SPARQL subset, forward-chaining inference (including the temporal
before/after catalog), and federated import."""

from .annotations import (AnnotationTag, PageRef, ParseOutcome, compile_tags,
                          infer_literal_type, parse_annotations)
from .errors import (FederationError, InvalidIntervalError,
                     MalformedResponseError, PageNotFoundError, ParseError,
                     PropertyKindConflictError, SemWikiError,
                     UnknownPrefixError, UnregisteredGraphError,
                     UpdateNotAllowedError)
from .federation import (AlignmentMap, EndpointConfig, ImportReport,
                         align_and_ingest, fetch_select)
from .rio import load_rdf, serialize
from .rules import (FixpointReport, Rule, RuleSet, apply_rule_once,
                    rdfs_lite_ruleset, run_fixpoint, ruleset_from_catalog)
from .sparql import (SolutionSet, evaluate_construct, evaluate_describe,
                     evaluate_select, execute_insert_where, parse_query)
from .store import (ALL_GRAPHS, DATA, HUTO, INFERRED, USCO, GraphStore,
                    init_store)
from .temporal import (DiscourseTime, load_huto_vocabulary, materialize,
                       normalization_ruleset, resolve_deictic,
                       resources_in_interval, temporal_ruleset,
                       temporality_of)
from .terms import Blank, Iri, Literal, Quad, Term
from .wiki import Revision, SaveResult, WikiEngine

__version__ = "0.1.0"
