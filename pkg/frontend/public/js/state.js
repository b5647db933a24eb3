/**
 * Hash routing and facet state.
 *
 * The whole UI state lives in location.hash as "#/view?key=value", so
 * filtered views survive reload and can be shared as links.
 */
export const PAGE_SIZE = 20;
export function parseRoute(hash) {
    const raw = hash.startsWith("#") ? hash.slice(1) : hash;
    const clean = raw.startsWith("/") ? raw.slice(1) : raw;
    const queryAt = clean.indexOf("?");
    const view = queryAt < 0 ? clean : clean.slice(0, queryAt);
    const params = new URLSearchParams(queryAt < 0 ? "" : clean.slice(queryAt + 1));
    return { view: view || "overview", params };
}
export function routeHash(view, params) {
    const qs = params?.toString() ?? "";
    return `#/${view}${qs ? `?${qs}` : ""}`;
}
const FACETS = ["benchmark", "split", "construct", "category", "q"];
export function decodeBrowseState(params) {
    const state = { offset: 0 };
    for (const facet of FACETS) {
        const value = params.get(facet);
        if (value)
            state[facet] = value;
    }
    const offset = Number(params.get("offset") ?? "0");
    if (Number.isInteger(offset) && offset > 0)
        state.offset = offset;
    return state;
}
export function encodeBrowseState(state) {
    const params = new URLSearchParams();
    for (const facet of FACETS) {
        const value = state[facet];
        if (value)
            params.set(facet, value);
    }
    if (state.offset > 0)
        params.set("offset", String(state.offset));
    return params;
}
export function toSampleFilter(state) {
    return { ...state, limit: PAGE_SIZE };
}
