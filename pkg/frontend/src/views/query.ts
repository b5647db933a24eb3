/**
 * Query console: free-form text, canned presets, and a benchmark picker
 * that fills a preset's task IRI slot from the live benchmark list.
 */

import type { ApiClient, BenchmarkInfo } from "../api.js";
import { PRESETS, instantiate, presetById } from "../presets.js";
import { el, errorBox, resultsTable } from "../render.js";

export async function renderQuery(root: HTMLElement, client: ApiClient): Promise<void> {
  let benchmarks: BenchmarkInfo[] = [];
  try {
    benchmarks = await client.benchmarks();
  } catch (err) {
    root.replaceChildren(errorBox(err));
    return;
  }

  const editor = el("textarea", {
    name: "query",
    rows: "10",
    spellcheck: "false",
    placeholder: "SELECT ?s WHERE { ?s a mcs:BenchmarkSample }",
  });

  const presetSelect = el("select", { name: "preset" });
  presetSelect.append(el("option", { value: "" }, "presets..."));
  for (const preset of PRESETS) {
    presetSelect.append(el("option", { value: preset.id }, preset.label));
  }

  const benchSelect = el("select", { name: "benchmark", disabled: "" });
  for (const b of benchmarks) {
    benchSelect.append(el("option", { value: b.name }, b.name));
  }

  const fillEditor = () => {
    const preset = presetById(presetSelect.value);
    if (!preset) return;
    if (preset.needsTask) {
      benchSelect.removeAttribute("disabled");
      const chosen = benchmarks.find((b) => b.name === benchSelect.value);
      editor.value = instantiate(preset, chosen?.taskIri);
    } else {
      benchSelect.setAttribute("disabled", "");
      editor.value = instantiate(preset);
    }
  };
  presetSelect.addEventListener("change", fillEditor);
  benchSelect.addEventListener("change", fillEditor);

  const output = el("div", { class: "query-output" });
  const run = el("button", { type: "submit" }, "Run");
  const form = el(
    "form",
    { class: "console" },
    el("div", { class: "toolbar" }, presetSelect, " ", benchSelect, " ", run),
    editor,
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    output.replaceChildren(el("p", { class: "loading" }, "Running..."));
    try {
      const results = await client.query(editor.value);
      const count = results.results.bindings.length;
      output.replaceChildren(
        el("p", { class: "row-count", "data-rows": String(count) },
          `${count} row${count === 1 ? "" : "s"}`),
        resultsTable(results),
      );
    } catch (err) {
      output.replaceChildren(errorBox(err));
    }
  });

  root.replaceChildren(el("h1", {}, "Query"), form, output);
}
