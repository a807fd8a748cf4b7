import { describe, expect, it } from "vitest";

import { WikiApi } from "../src/api.js";
import {
  browse, buildTableQuery, isSelected, renderCollectionList,
  renderCollectionTable, renderFacetPanel, tableFromBindings,
  toggleSelection,
} from "../src/facets.js";
import type { Selection, SparqlResults } from "../src/types.js";
import { routedFetch } from "./support.js";

const CITY = "http://example.org/wiki/category/City";
const IS_PART_OF = "http://example.org/wiki/prop/isPartOf";
const REGION_A = { type: "uri" as const,
                   value: "http://example.org/wiki/RegionA" };

describe("faceted browsing", () => {
  it("shows the full collection with oracle counts", async () => {
    const { fetchFn } = routedFetch({ "GET /facets": "facets_city_all" });
    const data = await browse(new WikiApi("", fetchFn), CITY, []);
    // fixture: Thies2 + Mbour in RegionA, Kolda2 in RegionB
    expect(data.instances).toHaveLength(3);
    const facet = data.facets.find((f) => f.property === IS_PART_OF)!;
    const counts = Object.fromEntries(
      facet.values.map((v) => [v.value.value, v.count]));
    expect(counts).toEqual({
      "http://example.org/wiki/RegionA": 2,
      "http://example.org/wiki/RegionB": 1,
    });
    const html = renderFacetPanel(data, []);
    expect(html).toContain('<span class="count">2</span>');
    expect(html).toContain('<span class="count">1</span>');
  });

  it("narrows the collection when a facet value is selected", async () => {
    const { fetchFn, seen } = routedFetch({
      "GET /facets": "facets_city_regionA" });
    const selections: Selection[] = [
      { property: IS_PART_OF, value: REGION_A }];
    const data = await browse(new WikiApi("", fetchFn), CITY, selections);
    expect(data.instances.map((i) => i.value)).toEqual([
      "http://example.org/wiki/Mbour",
      "http://example.org/wiki/Thies2",
    ]);
    expect(seen[0].url).toContain("filter=");
    const html = renderCollectionList(data);
    expect(html).toContain("Mbour");
    expect(html).not.toContain("Kolda2");
    const panel = renderFacetPanel(data, selections);
    expect(panel).toContain('class="active"');
  });

  it("toggles selections symmetrically", () => {
    const selection = { property: IS_PART_OF, value: REGION_A };
    const once = toggleSelection([], selection);
    expect(isSelected(once, IS_PART_OF, REGION_A)).toBe(true);
    const twice = toggleSelection(once, selection);
    expect(twice).toEqual([]);
  });

  it("renders a clear-filters affordance for empty collections", () => {
    const html = renderCollectionList({ class: CITY, instances: [], facets: [] });
    expect(html).toContain('data-action="clear-filters"');
  });

  it("builds the table query from class, selections and properties", () => {
    const query = buildTableQuery(CITY,
      [{ property: IS_PART_OF, value: REGION_A }], [IS_PART_OF]);
    expect(query).toContain(`?x rdf:type <${CITY}> .`);
    expect(query).toContain(
      `?x <${IS_PART_OF}> <http://example.org/wiki/RegionA> .`);
    expect(query).toContain(`OPTIONAL { ?x <${IS_PART_OF}> ?v0 }`);
  });

  it("arranges bindings into table rows", () => {
    const results: SparqlResults = {
      head: { vars: ["x", "v0"] },
      results: { bindings: [
        { x: { type: "uri", value: "urn:i:b" },
          v0: { type: "uri", value: "urn:r:1" } },
        { x: { type: "uri", value: "urn:i:a" } },
        { x: { type: "uri", value: "urn:i:b" },
          v0: { type: "uri", value: "urn:r:2" } },
      ] },
    };
    const rows = tableFromBindings(results, ["urn:p:isPartOf"]);
    expect(rows.map((r) => r.instance.value)).toEqual(["urn:i:a", "urn:i:b"]);
    expect(rows[1].cells[0].map((t) => t.value)).toEqual(["urn:r:1", "urn:r:2"]);
    const html = renderCollectionTable(rows, ["urn:p:isPartOf"]);
    expect(html).toContain("<table");
    expect(html.match(/<tr>/g)).toHaveLength(3); // header + 2 rows
  });
});
