// Test harness: a fetch implementation that replays recorded service
// responses (captured by record_fixtures.py from the real service).

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

interface Recorded {
  method: string;
  path: string;
  status: number;
  content_type: string;
  body: string;
}

const here = dirname(fileURLToPath(import.meta.url));
export const recorded: Record<string, Recorded> = JSON.parse(
  readFileSync(join(here, "fixtures", "recorded.json"), "utf8"),
);

export function scenarioResponse(name: string): Response {
  const entry = recorded[name];
  if (!entry) throw new Error(`no recorded scenario ${name}`);
  return new Response(entry.body, {
    status: entry.status,
    headers: { "content-type": entry.content_type },
  });
}

export interface SeenRequest {
  method: string;
  url: string;
  body?: string;
}

/** Routes "METHOD /path-prefix" patterns to recorded scenarios and
 * records every request it serves. */
export function routedFetch(
  routes: Record<string, string>,
): { fetchFn: FetchLike; seen: SeenRequest[] } {
  const seen: SeenRequest[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    const method = (init?.method ?? "GET").toUpperCase();
    seen.push({ method, url, body: init?.body as string | undefined });
    for (const [pattern, scenario] of Object.entries(routes)) {
      const [routeMethod, prefix] = pattern.split(" ", 2);
      const path = url.replace(/^https?:\/\/[^/]+/, "");
      if (method === routeMethod && path.startsWith(prefix)) {
        return scenarioResponse(scenario);
      }
    }
    throw new Error(`no route for ${method} ${url}`);
  };
  return { fetchFn, seen };
}

export function failingFetch(): FetchLike {
  return async () => {
    throw new TypeError("fetch failed: connection refused");
  };
}
