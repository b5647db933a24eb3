/**
 * DOM builders shared by the views. No framework: plain elements created
 * through el(), returned for the caller to mount.
 */

import type {
  BenchmarkInfo,
  Breakdown,
  ErrorBody,
  MatrixRow,
  SampleDocument,
  SampleSummary,
  SparqlCell,
  SparqlResults,
} from "./api.js";
import { ApiError } from "./api.js";
import { routeHash } from "./state.js";

type Child = Node | string;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) node.setAttribute(name, value);
  node.append(...children);
  return node;
}

function cellNode(cell: SparqlCell): Node {
  if (cell.type === "uri") {
    // Show the local name; the full IRI stays hoverable.
    const local = cell.value.replace(/.*[/#](?=.)/, "");
    return el("code", { title: cell.value }, local);
  }
  const text = cell["xml:lang"] ? `${cell.value} @${cell["xml:lang"]}` : cell.value;
  return el("span", {}, text);
}

export function resultsTable(results: SparqlResults): HTMLTableElement {
  const vars = results.head.vars;
  const head = el("tr", {}, ...vars.map((v) => el("th", {}, `?${v}`)));
  const body = el("tbody", {});
  for (const binding of results.results.bindings) {
    const row = el("tr", {});
    for (const name of vars) {
      const cell = binding[name];
      row.append(el("td", {}, cell ? cellNode(cell) : ""));
    }
    body.append(row);
  }
  return el("table", { class: "results" }, el("thead", {}, head), body);
}

export function benchmarkTable(benchmarks: BenchmarkInfo[]): HTMLTableElement {
  const head = el(
    "tr",
    {},
    ...["Benchmark", "Samples", "Splits", "Question types", "Constructs"].map((h) =>
      el("th", {}, h),
    ),
  );
  const body = el("tbody", {});
  for (const b of benchmarks) {
    const splits = Object.entries(b.splits)
      .map(([token, count]) => `${token} (${count})`)
      .join(", ");
    const link = el(
      "a",
      { href: routeHash("samples", new URLSearchParams({ benchmark: b.name })) },
      b.name,
    );
    body.append(
      el(
        "tr",
        { "data-benchmark": b.name },
        el("td", {}, link),
        el("td", { class: "num" }, String(b.sampleCount)),
        el("td", {}, splits),
        el("td", {}, b.questionTypes.join(", ")),
        el("td", {}, b.constructs.join(", ")),
      ),
    );
  }
  return el("table", { class: "benchmarks" }, el("thead", {}, head), body);
}

export function sampleList(samples: SampleSummary[]): HTMLElement {
  const list = el("ul", { class: "sample-list" });
  for (const s of samples) {
    const badges = [s.benchmark, s.split, ...s.categories].map((t) =>
      el("span", { class: "badge" }, t),
    );
    list.append(
      el(
        "li",
        { "data-sample": s.id },
        el("a", { href: routeHash(`sample/${s.id}`) }, s.id),
        el("span", { class: "badges" }, ...badges),
        el("p", {}, s.text),
      ),
    );
  }
  return list;
}

/** Detail card for one sample; the correct choice gets li.correct. */
export function sampleCard(doc: SampleDocument): HTMLElement {
  const correctId = doc.correctChoice?.["@id"];
  const inputs = el("dl", { class: "inputs" });
  for (const seg of doc.input) {
    inputs.append(el("dt", {}, seg["@type"].replace(/^Benchmark/, "")));
    inputs.append(el("dd", {}, seg.text));
  }
  const choices = el("ol", { class: "choices" });
  for (const seg of doc.choice ?? []) {
    const isCorrect = seg["@id"] === correctId;
    choices.append(
      el(
        "li",
        { class: isCorrect ? "correct" : "", "data-choice": seg["@id"] },
        seg.text,
        isCorrect ? el("span", { class: "mark" }, " ✓ correct") : "",
      ),
    );
  }
  return el(
    "article",
    { class: "sample-card", "data-sample": doc["@id"] },
    el("h2", {}, doc["@id"]),
    el("p", { class: "dataset" }, doc.includedInDataset),
    inputs,
    doc.choice?.length ? choices : el("p", {}, "No choices in this sample."),
  );
}

export function barChart(title: string, breakdown: Breakdown): HTMLElement {
  const max = Math.max(1, ...Object.values(breakdown.counts));
  const rows = el("div", { class: "bars" });
  for (const [label, count] of Object.entries(breakdown.counts)) {
    const width = Math.round((count / max) * 100);
    rows.append(
      el(
        "div",
        { class: "bar-row" },
        el("span", { class: "bar-label" }, label),
        el(
          "span",
          { class: "bar-track" },
          el("span", { class: "bar", style: `width: ${width}%`, "data-count": String(count) }),
        ),
        el("span", { class: "bar-count" }, String(count)),
      ),
    );
  }
  return el("section", { class: "chart" }, el("h3", {}, title), rows);
}

export function matrixTable(matrix: Record<string, MatrixRow>): HTMLTableElement {
  const head = el(
    "tr",
    {},
    ...["Benchmark", "Constructs", "Question types"].map((h) => el("th", {}, h)),
  );
  const body = el("tbody", {});
  for (const [name, row] of Object.entries(matrix)) {
    body.append(
      el(
        "tr",
        {},
        el("td", {}, name),
        el("td", {}, row.constructs.join(", ")),
        el("td", {}, row.questionTypes.join(", ")),
      ),
    );
  }
  return el("table", { class: "matrix" }, el("thead", {}, head), body);
}

export function errorBox(err: unknown): HTMLElement {
  let body: ErrorBody;
  if (err instanceof ApiError) {
    body = err.body;
  } else {
    body = { code: "client_error", message: err instanceof Error ? err.message : String(err) };
  }
  const box = el("div", { class: "error", "data-code": body.code });
  box.append(el("strong", {}, body.code), " ", body.message);
  const feature = body.detail?.["feature"];
  if (typeof feature === "string") {
    box.append(el("p", {}, `The query console does not support: ${feature}`));
  }
  return box;
}
