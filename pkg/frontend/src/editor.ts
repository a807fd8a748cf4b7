// Edit-and-save flow: save the wikitext, then re-render the page from
// the service's own view of it (factbox included, inferred facts and
// all). A property-kind conflict is located back to the offending
// annotation span so the editor can show the error inline.

import { ApiFailure, WikiApi } from "./api.js";
import { escapeHtml, renderDiagnostics, renderFactbox } from "./render.js";
import type { PageView, SaveResult } from "./types.js";

export interface SaveOk {
  ok: true;
  page: PageView;
  result: SaveResult;
}

export interface SaveFailed {
  ok: false;
  error: ApiFailure;
  span: [number, number] | null;
}

export function conflictSpan(
  wikitext: string, error: ApiFailure,
): [number, number] | null {
  if (error.kind !== "PropertyKindConflictError") return null;
  // the error message carries the property IRI; its local name is the
  // annotation's property name
  const match = error.message.match(/prop\/([^\s]+)/);
  if (!match) return null;
  const name = decodeURIComponent(match[1]).replace(/_/g, " ");
  const needle = `[[${name}::`;
  const start = wikitext.indexOf(needle);
  if (start < 0) return null;
  const end = wikitext.indexOf("]]", start);
  return end < 0 ? [start, wikitext.length] : [start, end + 2];
}

export async function editAndSave(
  api: WikiApi, ns: string, title: string, wikitext: string, author: string,
): Promise<SaveOk | SaveFailed> {
  let result: SaveResult;
  try {
    result = await api.savePage(ns, title, wikitext, author);
  } catch (error) {
    if (error instanceof ApiFailure) {
      return { ok: false, error, span: conflictSpan(wikitext, error) };
    }
    throw error;
  }
  const page = await api.getPage(ns, title);
  return { ok: true, page, result };
}

export function renderPageView(page: PageView): string {
  return `<article class="page">` +
    `<h2>${escapeHtml(page.namespace)}:${escapeHtml(page.title)}</h2>` +
    `<div class="prose">${escapeHtml(page.display_text)}</div>` +
    renderFactbox(page.factbox) +
    `<footer class="revision">rev ${page.revision.id} by ` +
    `${escapeHtml(page.revision.author)} at ${page.revision.timestamp}</footer>` +
    `</article>`;
}

export function renderSaveOutcome(outcome: SaveOk | SaveFailed,
                                  wikitext: string): string {
  if (outcome.ok) {
    const fp = outcome.result.fixpoint;
    return `<div class="save-ok">saved revision ${outcome.result.revision} ` +
      `(+${outcome.result.quads_added}/-${outcome.result.quads_removed} facts, ` +
      `${fp.total_added} inferred)</div>` +
      renderDiagnostics(outcome.result.diagnostics) +
      renderPageView(outcome.page);
  }
  const where = outcome.span
    ? `<pre class="conflict-context">${escapeHtml(wikitext.slice(0, outcome.span[0]))}` +
      `<mark class="error">${escapeHtml(wikitext.slice(outcome.span[0], outcome.span[1]))}</mark>` +
      `${escapeHtml(wikitext.slice(outcome.span[1]))}</pre>`
    : "";
  const retry = outcome.error.status === 0 || outcome.error.status >= 500
    ? `<button class="retry" data-action="retry-save">Retry</button>`
    : "";
  return `<div class="save-error" data-kind="${escapeHtml(outcome.error.kind)}">` +
    `${escapeHtml(outcome.error.message)}${retry}</div>${where}`;
}
