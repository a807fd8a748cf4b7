// Payload shapes of the wiki service HTTP API (see ../API.md).

export interface TermJson {
  type: "uri" | "literal" | "bnode";
  value: string;
  datatype?: string;
  "xml:lang"?: string;
}

export interface FactboxRow {
  property: string;
  value: TermJson;
  inferred: boolean;
}

export interface RevisionMeta {
  id: number;
  author: string;
  timestamp: string;
}

export interface PageView {
  namespace: string;
  title: string;
  display_text: string;
  wikitext: string;
  factbox: FactboxRow[];
  revision: RevisionMeta;
}

export interface Diagnostic {
  message: string;
  span: [number, number];
}

export interface SaveResult {
  revision: number;
  quads_added: number;
  quads_removed: number;
  fixpoint: {
    rounds: number;
    total_added: number;
    added_per_rule: Record<string, number>;
  };
  diagnostics: Diagnostic[];
}

export interface FacetValue {
  value: TermJson;
  count: number;
}

export interface Facet {
  property: string;
  values: FacetValue[];
}

export interface FacetData {
  class: string;
  instances: TermJson[];
  facets: Facet[];
}

export interface SparqlResults {
  head: { vars: string[] };
  results: { bindings: Record<string, TermJson>[] };
}

export interface Selection {
  property: string;
  value: TermJson;
}

export type QueryResponse =
  | { kind: "select"; results: SparqlResults }
  | { kind: "triples"; ntriples: string };
