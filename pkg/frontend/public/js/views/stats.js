import { barChart, el, errorBox, matrixTable } from "../render.js";
export async function renderStats(root, client) {
    root.replaceChildren(el("p", { class: "loading" }, "Loading statistics..."));
    try {
        const [splits, categories, choices, positions, matrix] = await Promise.all([
            client.groupedStat("splits"),
            client.groupedStat("categories"),
            client.groupedStat("choice-counts"),
            client.groupedStat("answer-positions"),
            client.constructMatrix(),
        ]);
        root.replaceChildren(el("h1", {}, "Statistics"), el("div", { class: "charts" }, barChart("Samples per split", splits.overall), barChart("Reasoning categories", categories.overall), barChart("Choices per sample", choices.overall), barChart("Correct answer position", positions.overall)), el("h2", {}, "Constructs and question types"), matrixTable(matrix));
    }
    catch (err) {
        root.replaceChildren(errorBox(err));
    }
}
