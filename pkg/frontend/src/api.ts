// Typed client for the wiki service. Every displayed fact comes from
// one of these calls: the UI itself never infers or evaluates.

import type {
  FacetData, PageView, QueryResponse, SaveResult, Selection, SparqlResults,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public kind: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function termToNt(value: Selection["value"]): string {
  if (value.type === "uri") return `<${value.value}>`;
  if (value.type === "bnode") return `_:${value.value}`;
  const quoted = `"${value.value.replace(/\\/g, "\\\\").replace(/"/g, '\\"')}"`;
  if (value["xml:lang"]) return `${quoted}@${value["xml:lang"]}`;
  if (value.datatype) return `${quoted}^^<${value.datatype}>`;
  return quoted;
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let kind = "HttpError";
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") {
      message = body.error;
      kind = body.kind ?? kind;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiFailure(response.status, kind, message);
}

export class WikiApi {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(url: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(url, init);
    } catch (error) {
      // fetch rejects only on network-level failure
      throw new ApiFailure(0, "NetworkError", String(error));
    }
    await raiseForStatus(response);
    return response;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.request(this.baseUrl + path);
    return (await response.json()) as T;
  }

  getPage(ns: string, title: string): Promise<PageView> {
    return this.getJson(`/pages/${encodeURIComponent(ns)}/${encodeURIComponent(title)}`);
  }

  async savePage(
    ns: string, title: string, wikitext: string, author: string,
  ): Promise<SaveResult> {
    const response = await this.request(
      `${this.baseUrl}/pages/${encodeURIComponent(ns)}/${encodeURIComponent(title)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ wikitext, author }),
      },
    );
    return (await response.json()) as SaveResult;
  }

  history(ns: string, title: string): Promise<{ revisions: { id: number; author: string; timestamp: string }[] }> {
    return this.getJson(`/pages/${encodeURIComponent(ns)}/${encodeURIComponent(title)}/history`);
  }

  async sparql(query: string): Promise<QueryResponse> {
    const response = await this.request(
      `${this.baseUrl}/sparql?query=${encodeURIComponent(query)}`,
    );
    const contentType = response.headers.get("content-type") ?? "";
    if (contentType.includes("sparql-results+json")) {
      return { kind: "select", results: (await response.json()) as SparqlResults };
    }
    return { kind: "triples", ntriples: await response.text() };
  }

  facets(classIri: string, selections: Selection[] = []): Promise<FacetData> {
    const params = new URLSearchParams({ class: classIri });
    for (const selection of selections) {
      params.append("filter",
        `${selection.property} ${termToNt(selection.value)}`);
    }
    return this.getJson(`/facets?${params.toString()}`);
  }

  async exportGraph(name: string): Promise<string> {
    const response = await this.request(
      `${this.baseUrl}/export?graph=${encodeURIComponent(name)}`,
    );
    return response.text();
  }
}
