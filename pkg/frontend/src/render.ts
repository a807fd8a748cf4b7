// Pure HTML-string renderers. Keeping these free of DOM access makes
// the views unit-testable against recorded service responses.

import type { Diagnostic, FactboxRow, TermJson } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function termLabel(term: TermJson): string {
  if (term.type === "uri") {
    const trimmed = term.value.replace(/[/#]$/, "");
    const tail = trimmed.split(/[/#]/).pop() ?? term.value;
    return decodeURIComponent(tail.replace(/_/g, " "));
  }
  if (term.type === "bnode") return `_:${term.value}`;
  return term.value;
}

export function renderTerm(term: TermJson): string {
  const label = escapeHtml(termLabel(term));
  if (term.type === "uri") {
    return `<span class="term uri" title="${escapeHtml(term.value)}">${label}</span>`;
  }
  if (term.type === "bnode") return `<span class="term bnode">${label}</span>`;
  const datatype = term.datatype
    ? ` <span class="datatype">${escapeHtml(term.datatype.split("#").pop() ?? "")}</span>`
    : "";
  return `<span class="term literal">${label}</span>${datatype}`;
}

export function propertyLabel(iri: string): string {
  return termLabel({ type: "uri", value: iri });
}

export function renderFactbox(rows: FactboxRow[]): string {
  if (!rows.length) {
    return `<div class="factbox empty">No semantic annotations.</div>`;
  }
  const body = rows.map((row) => {
    const badge = row.inferred ? ` <span class="badge inferred">inferred</span>` : "";
    return `<tr class="${row.inferred ? "inferred" : "asserted"}">` +
      `<td>${escapeHtml(propertyLabel(row.property))}</td>` +
      `<td>${renderTerm(row.value)}${badge}</td></tr>`;
  }).join("");
  return `<table class="factbox"><thead><tr><th>Property</th><th>Value</th>` +
    `</tr></thead><tbody>${body}</tbody></table>`;
}

export function renderDiagnostics(diagnostics: Diagnostic[]): string {
  if (!diagnostics.length) return "";
  const items = diagnostics
    .map((d) => `<li>${escapeHtml(d.message)} (at ${d.span[0]}..${d.span[1]})</li>`)
    .join("");
  return `<ul class="diagnostics">${items}</ul>`;
}

// Annotation-aware highlighting: [[...]] spans only, nothing else.
export function highlightWikitext(text: string): string {
  let out = "";
  let pos = 0;
  for (;;) {
    const start = text.indexOf("[[", pos);
    if (start < 0) break;
    const end = text.indexOf("]]", start + 2);
    if (end < 0) break;
    out += escapeHtml(text.slice(pos, start));
    out += `<mark class="annotation">${escapeHtml(text.slice(start, end + 2))}</mark>`;
    pos = end + 2;
  }
  out += escapeHtml(text.slice(pos));
  return out;
}
