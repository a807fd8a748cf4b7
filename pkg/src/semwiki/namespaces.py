"""Namespace IRIs and the well-known prefix environment.

Every vocabulary symbol used across the engine is defined here once, so
the rest of the code never spells out a raw IRI string.
"""

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

# Temporal ontology namespace (fixed; query prefixes depend on it).
HUTO_NS = "http://ns.inria.fr/huto/"

# Local namespaces. The wiki base IRI is configurable at engine level;
# these are the defaults used by fixtures and by the query prefix
# environment.
WIKI_NS = "http://example.org/wiki/"
PROP_NS = WIKI_NS + "prop/"
CATEGORY_NS = WIKI_NS + "category/"
USCO_NS = "http://example.org/usco/"
DATA_NS = "http://example.org/data/"

# Warehouse graph IRIs.
GRAPH_DATA = "urn:warehouse:data"
GRAPH_USCO = "urn:warehouse:usco"
GRAPH_HUTO = "urn:warehouse:huto"
GRAPH_INFERRED = "urn:warehouse:inferred"

WAREHOUSE_GRAPHS = (GRAPH_DATA, GRAPH_USCO, GRAPH_HUTO, GRAPH_INFERRED)

# Short names accepted by the CLI and config files.
GRAPH_ALIASES = {
    "data": GRAPH_DATA,
    "usco": GRAPH_USCO,
    "huto": GRAPH_HUTO,
    "inferred": GRAPH_INFERRED,
}

RDF_TYPE = RDF_NS + "type"
RDF_SUBJECT = RDF_NS + "subject"
RDF_PREDICATE = RDF_NS + "predicate"
RDF_OBJECT = RDF_NS + "object"

RDFS_CLASS = RDFS_NS + "Class"
RDFS_SUBCLASSOF = RDFS_NS + "subClassOf"
RDFS_SUBPROPERTYOF = RDFS_NS + "subPropertyOf"
RDFS_LABEL = RDFS_NS + "label"

OWL_NAMED_INDIVIDUAL = OWL_NS + "NamedIndividual"
OWL_OBJECT_PROPERTY = OWL_NS + "ObjectProperty"
OWL_DATATYPE_PROPERTY = OWL_NS + "DatatypeProperty"
OWL_ANNOTATION_PROPERTY = OWL_NS + "AnnotationProperty"
OWL_EQUIVALENT_PROPERTY = OWL_NS + "equivalentProperty"

XSD_STRING = XSD_NS + "string"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_BOOLEAN = XSD_NS + "boolean"
XSD_DATE = XSD_NS + "date"

HUTO_TEMPORAL_ANNOTATION = HUTO_NS + "TemporalAnnotation"
HUTO_TEMPORAL_EXPRESSION = HUTO_NS + "TemporalExpression"
HUTO_HAS_TEMPORAL_EXP = HUTO_NS + "hasTemporalExp"
HUTO_URI = HUTO_NS + "uri"
HUTO_TRIPLE = HUTO_NS + "triple"
HUTO_GRAPH = HUTO_NS + "graph"
HUTO_BEFORE = HUTO_NS + "before"
HUTO_AFTER = HUTO_NS + "after"
HUTO_DATE = HUTO_NS + "Date"
HUTO_INTERVAL = HUTO_NS + "Interval"
HUTO_BEGIN = HUTO_NS + "begin"
HUTO_END = HUTO_NS + "end"
HUTO_MONTH = HUTO_NS + "Month"
HUTO_NUMBER = HUTO_NS + "number"
HUTO_NUMBER_OF_DAY = HUTO_NS + "numberOfDay"
HUTO_EVEN = HUTO_NS + "even"
HUTO_YEAR = HUTO_NS + "year"
HUTO_MONTH_PROP = HUTO_NS + "month"
HUTO_DAY = HUTO_NS + "day"
HUTO_ISO_DATE = HUTO_NS + "isoDate"
HUTO_TODAY = HUTO_NS + "Today"
HUTO_YESTERDAY = HUTO_NS + "Yesterday"
HUTO_TOMORROW = HUTO_NS + "Tomorrow"

# Import batch provenance (one quad per federated import batch).
IMPORT_SOURCE = WIKI_NS + "meta/importedFrom"

# Prefixes available to every query without an explicit PREFIX
# declaration. Deployed SPARQL endpoints routinely predefine the core
# W3C prefixes plus their own vocabularies; the bundled temporal and
# sociocultural vocabularies get the same treatment here.
WELL_KNOWN_PREFIXES = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "owl": OWL_NS,
    "xsd": XSD_NS,
    "huto": HUTO_NS,
    "usco": USCO_NS,
    "data": DATA_NS,
    "wiki": WIKI_NS,
    "prop": PROP_NS,
    "cat": CATEGORY_NS,
}
