/** Canned queries for the console. */

export const TASK_IRI_SLOT = "{{taskIri}}";

export interface QueryPreset {
  id: string;
  label: string;
  /** True when the text contains TASK_IRI_SLOT and needs a benchmark picked. */
  needsTask: boolean;
  text: string;
}

export const PRESETS: readonly QueryPreset[] = [
  {
    id: "input-types",
    label: "Inputs of a benchmark's train split, with their types",
    needsTask: true,
    text: `SELECT ?sample ?input ?inputType WHERE {
  <${TASK_IRI_SLOT}> schema:dataset ?train .
  ?train rdf:type mcs:BenchmarkTrainDataset .
  ?train mcs:sample ?sample .
  ?sample mcs:input/schema:text ?input .
  ?sample mcs:input/rdf:type/rdfs:label ?inputType .
}`,
  },
  {
    id: "logical-questions",
    label: "Questions tagged as logical reasoning",
    needsTask: false,
    text: `SELECT ?sample ?question WHERE {
  ?sample rdf:type mcs:BenchmarkSample .
  ?sample mcs:input/rdf:type mcs:LogicalReasoning .
  ?sample mcs:input ?input .
  ?input rdf:type mcs:BenchmarkQuestion .
  ?input schema:text ?question .
}`,
  },
  {
    id: "correct-choices",
    label: "Samples with their correct choice texts",
    needsTask: false,
    text: `SELECT ?sample ?answer WHERE {
  ?sample mcs:correctChoice/schema:text ?answer .
}`,
  },
];

export function presetById(id: string): QueryPreset | undefined {
  return PRESETS.find((p) => p.id === id);
}

/** Fill the task slot; presets without a slot pass through unchanged. */
export function instantiate(preset: QueryPreset, taskIri?: string): string {
  if (!preset.needsTask) return preset.text;
  if (!taskIri) throw new Error(`preset ${preset.id} needs a benchmark task IRI`);
  if (/[<>\s"]/.test(taskIri)) throw new Error(`not a usable IRI: ${taskIri}`);
  return preset.text.replaceAll(TASK_IRI_SLOT, taskIri);
}
