// Faceted browsing over a class: selections narrow the instance set on
// the service side; the panel re-renders from the service's counts for
// the current selection, never from client-side arithmetic. The table
// view likewise fetches its cell values through the query endpoint.

import { WikiApi } from "./api.js";
import { escapeHtml, propertyLabel, renderTerm, termLabel } from "./render.js";
import type { FacetData, Selection, SparqlResults, TermJson } from "./types.js";

function sameTerm(a: TermJson, b: TermJson): boolean {
  return a.type === b.type && a.value === b.value
    && a.datatype === b.datatype && a["xml:lang"] === b["xml:lang"];
}

export function isSelected(selections: Selection[], property: string,
                           value: TermJson): boolean {
  return selections.some((s) => s.property === property
    && sameTerm(s.value, value));
}

export function toggleSelection(selections: Selection[],
                                selection: Selection): Selection[] {
  if (isSelected(selections, selection.property, selection.value)) {
    return selections.filter((s) => !(s.property === selection.property
      && sameTerm(s.value, selection.value)));
  }
  return [...selections, selection];
}

export function browse(api: WikiApi, classIri: string,
                       selections: Selection[]): Promise<FacetData> {
  return api.facets(classIri, selections);
}

function termNt(value: TermJson): string {
  if (value.type === "uri") return `<${value.value}>`;
  if (value.type === "bnode") return `_:${value.value}`;
  const quoted = `"${value.value.replace(/\\/g, "\\\\").replace(/"/g, '\\"')}"`;
  if (value["xml:lang"]) return `${quoted}@${value["xml:lang"]}`;
  if (value.datatype) return `${quoted}^^<${value.datatype}>`;
  return quoted;
}

// Table cells come from one SELECT over the service; the UI only
// arranges the bindings.
export function buildTableQuery(classIri: string, selections: Selection[],
                                properties: string[]): string {
  const lines = [`?x rdf:type <${classIri}> .`];
  for (const selection of selections) {
    lines.push(`?x <${selection.property}> ${termNt(selection.value)} .`);
  }
  properties.forEach((property, index) => {
    lines.push(`OPTIONAL { ?x <${property}> ?v${index} }`);
  });
  return `SELECT * WHERE {\n  ${lines.join("\n  ")}\n}`;
}

export interface TableRow {
  instance: TermJson;
  cells: TermJson[][];
}

export function tableFromBindings(results: SparqlResults,
                                  properties: string[]): TableRow[] {
  const byInstance = new Map<string, TableRow>();
  for (const binding of results.results.bindings) {
    const instance = binding["x"];
    if (!instance) continue;
    let row = byInstance.get(instance.value);
    if (!row) {
      row = { instance, cells: properties.map(() => []) };
      byInstance.set(instance.value, row);
    }
    properties.forEach((_, index) => {
      const value = binding[`v${index}`];
      if (value && !row!.cells[index].some((t) => sameTerm(t, value))) {
        row!.cells[index].push(value);
      }
    });
  }
  return [...byInstance.values()]
    .sort((a, b) => a.instance.value.localeCompare(b.instance.value));
}

export type CollectionView = "list" | "table";

export function renderCollectionList(data: FacetData): string {
  if (!data.instances.length) {
    return `<div class="collection empty">No matching instances. ` +
      `<button data-action="clear-filters">Clear filters</button></div>`;
  }
  const items = data.instances
    .map((i) => `<li data-iri="${escapeHtml(i.value)}">${renderTerm(i)}</li>`)
    .join("");
  return `<ul class="collection">${items}</ul>`;
}

export function renderCollectionTable(rows: TableRow[],
                                      properties: string[]): string {
  if (!rows.length) {
    return `<div class="collection empty">No matching instances. ` +
      `<button data-action="clear-filters">Clear filters</button></div>`;
  }
  const header = ["Instance", ...properties.map(propertyLabel)]
    .map((h) => `<th>${escapeHtml(h)}</th>`)
    .join("");
  const body = rows.map((row) => {
    const cells = row.cells
      .map((values) => `<td>${values.map(renderTerm).join(", ")}</td>`)
      .join("");
    return `<tr><td>${renderTerm(row.instance)}</td>${cells}</tr>`;
  }).join("");
  return `<table class="collection"><thead><tr>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`;
}

export function renderFacetPanel(data: FacetData,
                                 selections: Selection[]): string {
  const groups = data.facets.map((facet) => {
    const values = facet.values.map((fv) => {
      const active = isSelected(selections, facet.property, fv.value);
      return `<li class="${active ? "active" : ""}" ` +
        `data-property="${escapeHtml(facet.property)}" ` +
        `data-term="${escapeHtml(JSON.stringify(fv.value))}">` +
        `${escapeHtml(termLabel(fv.value))} ` +
        `<span class="count">${fv.count}</span></li>`;
    }).join("");
    return `<section class="facet"><h4>${escapeHtml(propertyLabel(facet.property))}</h4>` +
      `<ul>${values}</ul></section>`;
  }).join("");
  return `<aside class="facet-panel">${groups}</aside>`;
}
