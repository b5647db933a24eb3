/**
 * Typed client for the corpus HTTP API.
 *
 * Every method maps to one route; errors arrive as ApiError carrying the
 * server's structured body (code, message, optional detail) so views can
 * show the parameter or query position that was wrong.
 */
export class ApiError extends Error {
    status;
    body;
    constructor(status, body) {
        super(body.message);
        this.status = status;
        this.body = body;
        this.name = "ApiError";
    }
}
async function readError(res) {
    let body;
    try {
        body = (await res.json());
    }
    catch {
        body = { code: "http_error", message: `${res.status} ${res.statusText}` };
    }
    return new ApiError(res.status, body);
}
export class ApiClient {
    baseUrl;
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    async getJson(path) {
        const res = await fetch(this.baseUrl + path);
        if (!res.ok)
            throw await readError(res);
        return (await res.json());
    }
    async benchmarks() {
        const doc = await this.getJson("/api/benchmarks");
        return doc.benchmarks;
    }
    samples(filter = {}) {
        const params = new URLSearchParams();
        for (const [key, value] of Object.entries(filter)) {
            if (value !== undefined && value !== "")
                params.set(key, String(value));
        }
        const qs = params.toString();
        return this.getJson(`/api/samples${qs ? `?${qs}` : ""}`);
    }
    sample(id) {
        return this.getJson(`/api/samples/${encodeURIComponent(id)}`);
    }
    async query(text) {
        const res = await fetch(`${this.baseUrl}/api/query`, {
            method: "POST",
            headers: { "content-type": "application/sparql-query" },
            body: text,
        });
        if (!res.ok)
            throw await readError(res);
        return (await res.json());
    }
    async groupedStat(name) {
        const doc = await this.getJson(`/api/stats/${name}`);
        return doc.data;
    }
    async constructMatrix() {
        const doc = await this.getJson("/api/stats/construct-matrix");
        return doc.data;
    }
}
