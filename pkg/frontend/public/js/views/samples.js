/**
 * Faceted sample browser. Facet choices and paging are pushed into the
 * URL hash, so the browser back button and reloads keep the filter.
 */
import { el, errorBox, sampleCard, sampleList } from "../render.js";
import { PAGE_SIZE, decodeBrowseState, encodeBrowseState, routeHash, toSampleFilter, } from "../state.js";
function facetSelect(name, label, options, current, onChange) {
    const select = el("select", { name });
    select.append(el("option", { value: "" }, `any ${label}`));
    for (const option of options) {
        const node = el("option", { value: option }, option);
        if (option === current)
            node.setAttribute("selected", "");
        select.append(node);
    }
    select.addEventListener("change", () => onChange(select.value));
    return el("label", { class: "facet" }, `${label} `, select);
}
export async function renderSamples(root, client, params) {
    const state = decodeBrowseState(params);
    root.replaceChildren(el("p", { class: "loading" }, "Loading samples..."));
    const apply = (patch) => {
        const next = { ...state, ...patch };
        if (!("offset" in patch))
            next.offset = 0; // any facet change restarts paging
        location.hash = routeHash("samples", encodeBrowseState(next));
    };
    try {
        const benchmarks = await client.benchmarks();
        const page = await client.samples(toSampleFilter(state));
        const constructs = [...new Set(benchmarks.flatMap((b) => b.constructs))].sort();
        const splits = [...new Set(benchmarks.flatMap((b) => Object.keys(b.splits)))].sort();
        const categories = Object.keys((await client.groupedStat("categories")).overall.counts).sort();
        const search = el("input", {
            type: "search",
            name: "q",
            value: state.q ?? "",
            placeholder: "search text",
        });
        search.addEventListener("change", () => apply({ q: search.value || undefined }));
        const form = el("form", { class: "facets" }, facetSelect("benchmark", "benchmark", benchmarks.map((b) => b.name), state.benchmark, (v) => apply({ benchmark: v || undefined })), facetSelect("split", "split", splits, state.split, (v) => apply({ split: v || undefined })), facetSelect("construct", "construct", constructs, state.construct, (v) => apply({ construct: v || undefined })), facetSelect("category", "category", categories, state.category, (v) => apply({ category: v || undefined })), el("label", { class: "facet" }, "text ", search));
        form.addEventListener("submit", (event) => event.preventDefault());
        const pager = el("p", { class: "pager" });
        const from = page.total === 0 ? 0 : page.offset + 1;
        const to = Math.min(page.offset + PAGE_SIZE, page.total);
        pager.append(el("span", { class: "total", "data-total": String(page.total) }, `${from}-${to} of ${page.total} samples`));
        if (page.offset > 0) {
            const prev = el("button", { type: "button" }, "previous");
            prev.addEventListener("click", () => apply({ offset: Math.max(0, state.offset - PAGE_SIZE) }));
            pager.append(" ", prev);
        }
        if (to < page.total) {
            const next = el("button", { type: "button" }, "next");
            next.addEventListener("click", () => apply({ offset: state.offset + PAGE_SIZE }));
            pager.append(" ", next);
        }
        root.replaceChildren(el("h1", {}, "Samples"), form, pager, sampleList(page.samples));
    }
    catch (err) {
        root.replaceChildren(errorBox(err));
    }
}
export async function renderSampleDetail(root, client, sampleId) {
    root.replaceChildren(el("p", { class: "loading" }, `Loading ${sampleId}...`));
    try {
        const doc = await client.sample(sampleId);
        root.replaceChildren(el("p", {}, el("a", { href: routeHash("samples") }, "← all samples")), sampleCard(doc));
    }
    catch (err) {
        root.replaceChildren(errorBox(err));
    }
}
