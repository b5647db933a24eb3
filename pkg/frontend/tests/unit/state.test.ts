import { describe, expect, it } from "vitest";

import {
  decodeBrowseState,
  encodeBrowseState,
  parseRoute,
  routeHash,
  toSampleFilter,
} from "../../src/state.js";

describe("parseRoute", () => {
  it("defaults to the overview", () => {
    expect(parseRoute("").view).toBe("overview");
    expect(parseRoute("#/").view).toBe("overview");
  });

  it("splits view and params", () => {
    const route = parseRoute("#/samples?benchmark=CycIC&offset=20");
    expect(route.view).toBe("samples");
    expect(route.params.get("benchmark")).toBe("CycIC");
    expect(route.params.get("offset")).toBe("20");
  });

  it("keeps slashes inside the view segment", () => {
    expect(parseRoute("#/sample/SocialIQa-37").view).toBe("sample/SocialIQa-37");
  });

  it("round-trips through routeHash", () => {
    const hash = routeHash("samples", new URLSearchParams({ q: "party girl" }));
    const route = parseRoute(hash);
    expect(route.view).toBe("samples");
    expect(route.params.get("q")).toBe("party girl");
  });
});

describe("browse state", () => {
  it("round-trips every facet", () => {
    const state = {
      benchmark: "SocialIQa",
      split: "train",
      construct: "Question",
      category: "logical reasoning",
      q: "party",
      offset: 40,
    };
    expect(decodeBrowseState(encodeBrowseState(state))).toEqual(state);
  });

  it("drops empty facets and zero offset from the URL", () => {
    const params = encodeBrowseState({ benchmark: "CycIC", offset: 0 });
    expect(params.toString()).toBe("benchmark=CycIC");
  });

  it("ignores junk offsets", () => {
    expect(decodeBrowseState(new URLSearchParams("offset=-3")).offset).toBe(0);
    expect(decodeBrowseState(new URLSearchParams("offset=two")).offset).toBe(0);
    expect(decodeBrowseState(new URLSearchParams("offset=2.5")).offset).toBe(0);
  });

  it("feeds the API filter with a page size", () => {
    const filter = toSampleFilter({ category: "logical reasoning", offset: 20 });
    expect(filter.category).toBe("logical reasoning");
    expect(filter.offset).toBe(20);
    expect(filter.limit).toBeGreaterThan(0);
  });
});
