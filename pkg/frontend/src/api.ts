/**
 * Typed client for the corpus HTTP API.
 *
 * Every method maps to one route; errors arrive as ApiError carrying the
 * server's structured body (code, message, optional detail) so views can
 * show the parameter or query position that was wrong.
 */

export interface BenchmarkInfo {
  id: string;
  name: string;
  baseIri: string;
  taskIri: string;
  questionTypes: string[];
  constructs: string[];
  splits: Record<string, number>;
  sampleCount: number;
}

export interface SampleSummary {
  id: string;
  iri: string;
  benchmark: string;
  split: string;
  text: string;
  choiceCount: number;
  constructs: string[];
  categories: string[];
}

export interface SamplePage {
  total: number;
  offset: number;
  samples: SampleSummary[];
}

export interface SegmentNode {
  "@id": string;
  "@type": string;
  text: string;
}

/** One sample as its compact JSON-LD document. */
export interface SampleDocument {
  "@id": string;
  "@type": string;
  includedInDataset: string;
  input: SegmentNode[];
  choice?: SegmentNode[];
  correctChoice?: { "@id": string };
}

export interface SparqlCell {
  type: "uri" | "literal";
  value: string;
  "xml:lang"?: string;
}

export interface SparqlResults {
  head: { vars: string[] };
  results: { bindings: Record<string, SparqlCell>[] };
}

export type StatName =
  | "splits"
  | "categories"
  | "choice-counts"
  | "answer-positions"
  | "construct-matrix";

export interface Breakdown {
  counts: Record<string, number>;
  total: number;
}

export interface GroupedStat {
  overall: Breakdown;
  byBenchmark: Record<string, Breakdown>;
}

export interface MatrixRow {
  constructs: string[];
  questionTypes: string[];
}

export interface ErrorBody {
  code: string;
  message: string;
  detail?: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

export interface SampleFilter {
  benchmark?: string;
  split?: string;
  construct?: string;
  category?: string;
  q?: string;
  limit?: number;
  offset?: number;
}

async function readError(res: Response): Promise<ApiError> {
  let body: ErrorBody;
  try {
    body = (await res.json()) as ErrorBody;
  } catch {
    body = { code: "http_error", message: `${res.status} ${res.statusText}` };
  }
  return new ApiError(res.status, body);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.baseUrl + path);
    if (!res.ok) throw await readError(res);
    return (await res.json()) as T;
  }

  async benchmarks(): Promise<BenchmarkInfo[]> {
    const doc = await this.getJson<{ benchmarks: BenchmarkInfo[] }>("/api/benchmarks");
    return doc.benchmarks;
  }

  samples(filter: SampleFilter = {}): Promise<SamplePage> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filter)) {
      if (value !== undefined && value !== "") params.set(key, String(value));
    }
    const qs = params.toString();
    return this.getJson<SamplePage>(`/api/samples${qs ? `?${qs}` : ""}`);
  }

  sample(id: string): Promise<SampleDocument> {
    return this.getJson<SampleDocument>(`/api/samples/${encodeURIComponent(id)}`);
  }

  async query(text: string): Promise<SparqlResults> {
    const res = await fetch(`${this.baseUrl}/api/query`, {
      method: "POST",
      headers: { "content-type": "application/sparql-query" },
      body: text,
    });
    if (!res.ok) throw await readError(res);
    return (await res.json()) as SparqlResults;
  }

  async groupedStat(name: Exclude<StatName, "construct-matrix">): Promise<GroupedStat> {
    const doc = await this.getJson<{ name: string; data: GroupedStat }>(`/api/stats/${name}`);
    return doc.data;
  }

  async constructMatrix(): Promise<Record<string, MatrixRow>> {
    const doc = await this.getJson<{ name: string; data: Record<string, MatrixRow> }>(
      "/api/stats/construct-matrix",
    );
    return doc.data;
  }
}
