import { benchmarkTable, el, errorBox } from "../render.js";
export async function renderOverview(root, client) {
    root.replaceChildren(el("p", { class: "loading" }, "Loading benchmarks..."));
    try {
        const benchmarks = await client.benchmarks();
        const total = benchmarks.reduce((n, b) => n + b.sampleCount, 0);
        root.replaceChildren(el("h1", {}, "Benchmarks"), el("p", {}, `${benchmarks.length} benchmarks, ${total} samples in this corpus.`), benchmarkTable(benchmarks));
    }
    catch (err) {
        root.replaceChildren(errorBox(err));
    }
}
