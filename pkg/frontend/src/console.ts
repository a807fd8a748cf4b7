// Query console: SELECT renders a sortable table, CONSTRUCT/DESCRIBE a
// triple listing; parse and authorization errors are rendered, never
// swallowed.

import { ApiFailure, WikiApi } from "./api.js";
import { escapeHtml, renderTerm } from "./render.js";
import type { SparqlResults, TermJson } from "./types.js";

export type ConsoleOutput =
  | { kind: "table"; results: SparqlResults }
  | { kind: "triples"; ntriples: string }
  | { kind: "error"; error: ApiFailure };

export async function runQuery(api: WikiApi,
                               text: string): Promise<ConsoleOutput> {
  try {
    const response = await api.sparql(text);
    if (response.kind === "select") {
      return { kind: "table", results: response.results };
    }
    return { kind: "triples", ntriples: response.ntriples };
  } catch (error) {
    if (error instanceof ApiFailure) return { kind: "error", error };
    throw error;
  }
}

export function sortBindings(results: SparqlResults, variable: string,
                             descending = false): SparqlResults {
  const bindings = [...results.results.bindings].sort((a, b) => {
    const av = a[variable]?.value ?? "";
    const bv = b[variable]?.value ?? "";
    return descending ? bv.localeCompare(av) : av.localeCompare(bv);
  });
  return { head: results.head, results: { bindings } };
}

export function renderResultsTable(results: SparqlResults): string {
  const vars = results.head.vars;
  if (!results.results.bindings.length) {
    return `<div class="results empty">No results.</div>`;
  }
  const header = vars
    .map((v) => `<th data-action="sort" data-var="${escapeHtml(v)}">?${escapeHtml(v)}</th>`)
    .join("");
  const rows = results.results.bindings.map((binding) => {
    const cells = vars.map((v) => {
      const term: TermJson | undefined = binding[v];
      return `<td>${term ? renderTerm(term) : ""}</td>`;
    }).join("");
    return `<tr>${cells}</tr>`;
  }).join("");
  return `<table class="results"><thead><tr>${header}</tr></thead>` +
    `<tbody>${rows}</tbody></table>`;
}

export function renderTriples(ntriples: string): string {
  const lines = ntriples.split("\n").filter((line) => line.trim());
  if (!lines.length) return `<div class="results empty">No results.</div>`;
  const items = lines
    .map((line) => `<li><code>${escapeHtml(line)}</code></li>`)
    .join("");
  return `<ol class="triples">${items}</ol>`;
}

// "... at line 3, column 7" -> highlight that position in the query
export function errorPosition(message: string): { line: number; column: number } | null {
  const match = message.match(/line (\d+)(?:, column (\d+))?/);
  if (!match) return null;
  return { line: Number(match[1]), column: Number(match[2] ?? 1) };
}

export function renderQueryError(error: ApiFailure, query: string): string {
  const position = errorPosition(error.message);
  let context = "";
  if (position) {
    const lines = query.split("\n");
    const line = lines[position.line - 1] ?? "";
    const caret = " ".repeat(Math.max(0, position.column - 1)) + "^";
    context = `<pre class="error-context">${escapeHtml(line)}\n${caret}</pre>`;
  }
  return `<div class="query-error" data-kind="${escapeHtml(error.kind)}">` +
    `${escapeHtml(error.message)}</div>${context}`;
}

export function renderConsoleOutput(output: ConsoleOutput,
                                    query: string): string {
  if (output.kind === "table") return renderResultsTable(output.results);
  if (output.kind === "triples") return renderTriples(output.ntriples);
  return renderQueryError(output.error, query);
}
