"""Read-only HTTP API over a loaded corpus.

The app is built once around an immutable corpus and its frozen triple
store; request handling never mutates shared state, so the endpoints are
safe under concurrent access. Every response body, including errors, is
JSON; errors always carry code/message/detail.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import analytics, jsonld, query as q
from .model import BenchmarkCorpus, ConstructKind, SplitKind, local_name
from .store import TripleStore, load_corpus

DEFAULT_QUERY_TIMEOUT = 10.0
DEFAULT_MAX_QUERY_BYTES = 64 * 1024
MAX_PAGE = 200
DEFAULT_PAGE = 25

_STATS = {
    "construct-matrix": lambda c: analytics.matrix_to_json(analytics.construct_matrix(c)),
    "splits": lambda c: analytics.split_counts(c).to_json(),
    "categories": lambda c: analytics.category_distribution(c).to_json(),
    "answer-positions": lambda c: analytics.answer_position_distribution(c).to_json(),
    "choice-counts": lambda c: analytics.choice_count_histogram(c).to_json(),
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: dict | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail or {}


def _bad_param(param: str, message: str) -> ApiError:
    return ApiError(400, "bad_parameter", message, {"parameter": param})


def create_app(corpus: BenchmarkCorpus, store: TripleStore | None = None, *,
               query_timeout: float = DEFAULT_QUERY_TIMEOUT,
               max_query_bytes: int = DEFAULT_MAX_QUERY_BYTES,
               static_dir: str | Path | None = None) -> FastAPI:
    if store is None:
        store = TripleStore()
        load_corpus(store, corpus)

    # Browse indexes, computed once at startup.
    samples = sorted(corpus.samples, key=lambda s: s.id)
    by_local = {local_name(s.id, s.benchmark.base_iri): s for s in samples}
    summaries = []
    for s in samples:
        summaries.append({
            "id": local_name(s.id, s.benchmark.base_iri),
            "iri": s.id,
            "benchmark": s.benchmark.name,
            "split": s.split.token,
            "text": s.inputs[0].text if s.inputs else "",
            "choiceCount": len(s.choices),
            "constructs": analytics.sort_constructs(
                {seg.construct.value for seg in (*s.inputs, *s.choices)}),
            "categories": sorted(c.label for c in s.categories),
        })
    known_categories = {c.label for s in samples for c in s.categories}
    split_counts = analytics.split_counts(corpus)
    matrix = analytics.construct_matrix(corpus)

    benchmarks_payload = []
    for name in sorted(corpus.benchmarks):
        bench = corpus.benchmarks[name]
        per = split_counts.by_benchmark.get(name)
        benchmarks_payload.append({
            "id": name,
            "name": name,
            "baseIri": bench.base_iri,
            "taskIri": corpus.task_iri(name),
            "questionTypes": sorted(corpus.question_types.get(name, frozenset())),
            "constructs": analytics.sort_constructs(matrix[name].constructs),
            "splits": dict(sorted(per.counts.items())) if per else {},
            "sampleCount": per.total if per else 0,
        })

    stats_payload = {name: build(corpus) for name, build in _STATS.items()}

    app = FastAPI(title="mcsbench", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message, "detail": exc.detail})

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(_request: Request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed"}.get(exc.status_code, "http_error")
        return JSONResponse(status_code=exc.status_code,
                            content={"code": code, "message": str(exc.detail), "detail": {}})

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"code": "bad_parameter", "message": "invalid request",
                                     "detail": {"errors": exc.errors()}})

    @app.get("/api/benchmarks")
    def get_benchmarks():
        return {"benchmarks": benchmarks_payload}

    @app.get("/api/samples")
    def get_samples(benchmark: str | None = None, split: str | None = None,
                    construct: str | None = None, category: str | None = None,
                    q: str | None = None,
                    limit: str | None = None, offset: str | None = None):
        needle = q
        if benchmark is not None and benchmark not in corpus.benchmarks:
            raise _bad_param("benchmark", f"unknown benchmark {benchmark!r}")
        if split is not None:
            try:
                SplitKind.from_token(split)
            except ValueError:
                raise _bad_param("split", f"unknown split {split!r}") from None
        if construct is not None:
            try:
                ConstructKind.from_name(construct)
            except ValueError:
                raise _bad_param("construct", f"unknown construct {construct!r}") from None
        if category is not None and category not in known_categories:
            raise _bad_param("category", f"unknown category {category!r}")

        def parse_int(name: str, value: str | None, default: int, lo: int, hi: int) -> int:
            if value is None:
                return default
            try:
                n = int(value)
            except ValueError:
                raise _bad_param(name, f"{name} must be an integer") from None
            if not lo <= n <= hi:
                raise _bad_param(name, f"{name} must be between {lo} and {hi}")
            return n

        page = parse_int("limit", limit, DEFAULT_PAGE, 1, MAX_PAGE)
        skip = parse_int("offset", offset, 0, 0, 10**9)

        selected = []
        lowered = needle.lower() if needle else None
        for entry, sample in zip(summaries, samples):
            if benchmark is not None and entry["benchmark"] != benchmark:
                continue
            if split is not None and entry["split"] != split:
                continue
            if construct is not None and construct not in entry["constructs"]:
                continue
            if category is not None and category not in entry["categories"]:
                continue
            if lowered is not None:
                texts = [seg.text for seg in (*sample.inputs, *sample.choices)]
                if not any(lowered in t.lower() for t in texts):
                    continue
            selected.append(entry)
        return {"total": len(selected), "offset": skip,
                "samples": selected[skip:skip + page]}

    @app.get("/api/samples/{sample_id}")
    def get_sample(sample_id: str):
        sample = by_local.get(sample_id)
        if sample is None:
            raise ApiError(404, "not_found", f"no sample named {sample_id!r}", {"id": sample_id})
        return jsonld.to_jsonld(sample)

    @app.post("/api/query")
    async def post_query(request: Request):
        body = await request.body()
        if len(body) > max_query_bytes:
            raise ApiError(413, "query_too_large",
                           f"query exceeds {max_query_bytes} bytes", {"limit": max_query_bytes})
        text = body.decode("utf-8", errors="replace")
        if not text.strip():
            raise ApiError(422, "syntax_error", "empty query", {})
        try:
            ast = q.parse_query(text)
        except q.UnsupportedFeatureError as exc:
            raise ApiError(422, "unsupported_feature", str(exc),
                           {"feature": exc.feature, "line": exc.line, "column": exc.col}) from None
        except q.QuerySyntaxError as exc:
            raise ApiError(422, "syntax_error", str(exc),
                           {"line": exc.line, "column": exc.col}) from None
        try:
            table = q.evaluate(ast, store, timeout=query_timeout)
        except q.QueryTimeout as exc:
            raise ApiError(408, "query_timeout", str(exc), {"timeoutSeconds": query_timeout}) from None
        return table.to_json()

    @app.get("/api/stats/{name}")
    def get_stat(name: str):
        payload = stats_payload.get(name)
        if payload is None:
            raise ApiError(404, "unknown_stat", f"no statistic named {name!r}",
                           {"available": sorted(stats_payload)})
        return {"name": name, "data": payload}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app
