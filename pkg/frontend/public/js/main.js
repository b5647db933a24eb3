import { ApiClient } from "./api.js";
import { el } from "./render.js";
import { parseRoute } from "./state.js";
import { renderOverview } from "./views/overview.js";
import { renderQuery } from "./views/query.js";
import { renderSampleDetail, renderSamples } from "./views/samples.js";
import { renderStats } from "./views/stats.js";
const client = new ApiClient();
async function route(root) {
    const { view, params } = parseRoute(location.hash);
    for (const link of document.querySelectorAll("nav a")) {
        link.classList.toggle("active", link.getAttribute("data-view") === view.split("/")[0]);
    }
    if (view === "overview")
        return renderOverview(root, client);
    if (view === "samples")
        return renderSamples(root, client, params);
    if (view.startsWith("sample/")) {
        return renderSampleDetail(root, client, decodeURIComponent(view.slice("sample/".length)));
    }
    if (view === "query")
        return renderQuery(root, client);
    if (view === "stats")
        return renderStats(root, client);
    root.replaceChildren(el("p", { class: "error" }, `No such view: ${view}`));
}
function main() {
    const root = document.getElementById("view");
    if (!root)
        throw new Error("missing #view container");
    window.addEventListener("hashchange", () => void route(root));
    void route(root);
}
main();
