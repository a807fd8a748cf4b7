// Browser bootstrap: hash routing and event wiring around the pure
// view modules. State lives entirely in the URL hash plus the service,
// so a reload reproduces the same view.

import { WikiApi } from "./api.js";
import { editAndSave, renderPageView, renderSaveOutcome } from "./editor.js";
import {
  browse, buildTableQuery, renderCollectionList, renderCollectionTable,
  renderFacetPanel, tableFromBindings, toggleSelection,
} from "./facets.js";
import { renderConsoleOutput, runQuery, sortBindings } from "./console.js";
import { highlightWikitext } from "./render.js";
import type { Selection } from "./types.js";

const api = new WikiApi("");

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function parseHash(): { route: string; args: string[] } {
  const hash = location.hash.replace(/^#\/?/, "");
  const [route, ...args] = hash.split("/").map(decodeURIComponent);
  return { route: route || "page", args };
}

// -- page editor ------------------------------------------------------

let currentNs = "Main";
let currentTitle = "Dakar";

async function showPage(ns: string, title: string) {
  currentNs = ns;
  currentTitle = title;
  el("view").innerHTML = `<h2>${ns}:${title}</h2><p>loading…</p>`;
  try {
    const page = await api.getPage(ns, title);
    el("view").innerHTML = renderPageView(page);
    (el("wikitext") as HTMLTextAreaElement).value = page.wikitext;
  } catch {
    el("view").innerHTML = `<p>New page. Write below and save.</p>`;
    (el("wikitext") as HTMLTextAreaElement).value = "";
  }
  refreshHighlight();
}

function refreshHighlight() {
  const text = (el("wikitext") as HTMLTextAreaElement).value;
  el("highlight").innerHTML = highlightWikitext(text);
}

async function saveCurrent() {
  const wikitext = (el("wikitext") as HTMLTextAreaElement).value;
  const author = (el("author") as HTMLInputElement).value || "anonymous";
  const outcome = await editAndSave(api, currentNs, currentTitle, wikitext, author);
  el("view").innerHTML = renderSaveOutcome(outcome, wikitext);
}

// -- faceted browsing ----------------------------------------------------

let selections: Selection[] = [];
let collectionView: "list" | "table" = "list";

async function showBrowse(classIri: string) {
  const data = await browse(api, classIri, selections);
  el("facets").innerHTML = renderFacetPanel(data, selections);
  if (collectionView === "list") {
    el("collection").innerHTML = renderCollectionList(data);
  } else {
    const properties = data.facets.map((f) => f.property);
    const query = buildTableQuery(classIri, selections, properties);
    const response = await api.sparql(query);
    if (response.kind === "select") {
      el("collection").innerHTML = renderCollectionTable(
        tableFromBindings(response.results, properties), properties);
    }
  }
  for (const item of el("facets").querySelectorAll("li[data-property]")) {
    item.addEventListener("click", () => {
      const property = (item as HTMLElement).dataset.property!;
      const value = JSON.parse((item as HTMLElement).dataset.term!);
      selections = toggleSelection(selections, { property, value });
      void showBrowse(classIri);
    });
  }
  const clear = el("collection").querySelector("[data-action=clear-filters]");
  clear?.addEventListener("click", () => {
    selections = [];
    void showBrowse(classIri);
  });
}

// -- query console ---------------------------------------------------------

let lastQuery = "";

async function runConsole() {
  lastQuery = (el("query") as HTMLTextAreaElement).value;
  const output = await runQuery(api, lastQuery);
  el("results").innerHTML = renderConsoleOutput(output, lastQuery);
  if (output.kind === "table") {
    for (const th of el("results").querySelectorAll("th[data-action=sort]")) {
      th.addEventListener("click", () => {
        const variable = (th as HTMLElement).dataset.var!;
        const sorted = sortBindings(output.results, variable);
        el("results").innerHTML = renderConsoleOutput(
          { kind: "table", results: sorted }, lastQuery);
      });
    }
  }
}

// -- routing -----------------------------------------------------------

function route() {
  const { route, args } = parseHash();
  for (const section of document.querySelectorAll("main > section")) {
    (section as HTMLElement).hidden = true;
  }
  if (route === "browse") {
    el("browse-section").hidden = false;
    if (args[0]) void showBrowse(args[0]);
  } else if (route === "query") {
    el("query-section").hidden = false;
  } else {
    el("page-section").hidden = false;
    void showPage(args[0] || "Main", args[1] || "Dakar");
  }
}

export function start() {
  window.addEventListener("hashchange", route);
  el("save").addEventListener("click", () => void saveCurrent());
  el("wikitext").addEventListener("input", refreshHighlight);
  el("run-query").addEventListener("click", () => void runConsole());
  el("open-page").addEventListener("click", () => {
    const ns = (el("page-ns") as HTMLInputElement).value || "Main";
    const title = (el("page-title") as HTMLInputElement).value;
    location.hash = `#/page/${encodeURIComponent(ns)}/${encodeURIComponent(title)}`;
  });
  el("open-browse").addEventListener("click", () => {
    const classIri = (el("browse-class") as HTMLInputElement).value;
    selections = [];
    location.hash = `#/browse/${encodeURIComponent(classIri)}`;
  });
  el("view-toggle").addEventListener("click", () => {
    collectionView = collectionView === "list" ? "table" : "list";
    route();
  });
  route();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
