import pytest
from fastapi.testclient import TestClient

from mcsbench.jsonld import to_jsonld
from mcsbench.server import create_app

from .conftest import WORKLOAD_LOGICAL_QUESTIONS, input_types_query


@pytest.fixture(scope="module")
def client(fixture_corpus, fixture_store):
    app = create_app(fixture_corpus, fixture_store)
    return TestClient(app)


@pytest.fixture(scope="module")
def benchmarks(client):
    return {b["name"]: b for b in client.get("/api/benchmarks").json()["benchmarks"]}


class TestBenchmarks:
    def test_lists_all_seven(self, benchmarks):
        assert sorted(benchmarks) == ["CommonsenseQA", "CosmosQA", "CycIC",
                                      "HellaSwag", "PhysicalIQa", "SocialIQa", "aNLI"]

    def test_row_shape(self, benchmarks):
        row = benchmarks["SocialIQa"]
        assert row["taskIri"].endswith("SocialIQa/task")
        assert row["splits"] == {"dev": 2, "train": 38}
        assert row["sampleCount"] == 40
        assert row["questionTypes"] == ["MultipleChoice"]
        assert row["constructs"] == ["Context", "Question", "Answer"]

    def test_cycic_question_types(self, benchmarks):
        assert benchmarks["CycIC"]["questionTypes"] == ["MultipleChoice", "TrueFalse"]


class TestSampleListing:
    def test_default_page(self, client):
        body = client.get("/api/samples").json()
        assert body["total"] == 59
        assert body["offset"] == 0
        assert len(body["samples"]) == 25

    def test_pagination_window(self, client):
        body = client.get("/api/samples", params={"limit": 5, "offset": 57}).json()
        assert len(body["samples"]) == 2

    def test_filter_by_benchmark_and_split(self, client):
        body = client.get("/api/samples",
                          params={"benchmark": "SocialIQa", "split": "dev"}).json()
        assert body["total"] == 2
        assert all(s["benchmark"] == "SocialIQa" and s["split"] == "dev"
                   for s in body["samples"])

    def test_filter_by_category(self, client):
        body = client.get("/api/samples",
                          params={"category": "logical reasoning"}).json()
        assert body["total"] == 3
        assert {s["benchmark"] for s in body["samples"]} == {"CycIC"}

    def test_filter_by_construct(self, client):
        body = client.get("/api/samples", params={"construct": "Goal"}).json()
        assert body["total"] == 3
        assert {s["benchmark"] for s in body["samples"]} == {"PhysicalIQa"}

    def test_text_search_spans_all_segments(self, client):
        body = client.get("/api/samples", params={"q": "party girl"}).json()
        assert body["total"] == 1
        assert body["samples"][0]["id"] == "SocialIQa-37"

    def test_search_is_case_insensitive(self, client):
        a = client.get("/api/samples", params={"q": "SKYLAR"}).json()["total"]
        b = client.get("/api/samples", params={"q": "skylar"}).json()["total"]
        assert a == b > 0

    def test_summary_shape(self, client):
        body = client.get("/api/samples", params={"q": "party girl"}).json()
        entry = body["samples"][0]
        assert entry["iri"].endswith("SocialIQa-37")
        assert entry["choiceCount"] == 3
        assert entry["constructs"] == ["Context", "Question", "Answer"]
        assert entry["text"].startswith("Skylar returned")

    @pytest.mark.parametrize("params,param", [
        ({"benchmark": "Nope"}, "benchmark"),
        ({"split": "validation"}, "split"),
        ({"construct": "Widget"}, "construct"),
        ({"category": "quantum vibes"}, "category"),
        ({"limit": "0"}, "limit"),
        ({"limit": "201"}, "limit"),
        ({"limit": "many"}, "limit"),
        ({"offset": "-1"}, "offset"),
    ])
    def test_bad_parameters_name_the_parameter(self, client, params, param):
        resp = client.get("/api/samples", params=params)
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "bad_parameter"
        assert body["detail"]["parameter"] == param


class TestSampleDetail:
    def test_detail_is_the_compact_document(self, client, worked_sample):
        resp = client.get("/api/samples/SocialIQa-37")
        assert resp.status_code == 200
        assert resp.json() == to_jsonld(worked_sample)

    def test_unknown_sample_404(self, client):
        resp = client.get("/api/samples/SocialIQa-99999")
        assert resp.status_code == 404
        body = resp.json()
        assert body["code"] == "not_found"
        assert body["detail"]["id"] == "SocialIQa-99999"


class TestQueryEndpoint:
    def post(self, client, text: str, **kw):
        return client.post("/api/query", content=text.encode("utf-8"), **kw)

    def test_workload_query_runs(self, client, benchmarks):
        task = benchmarks["CosmosQA"]["taskIri"]
        resp = self.post(client, input_types_query(task))
        assert resp.status_code == 200
        body = resp.json()
        assert body["head"]["vars"] == ["sample", "input", "inputType"]
        assert len(body["results"]["bindings"]) == 2

    def test_logical_questions_query(self, client):
        resp = self.post(client, WORKLOAD_LOGICAL_QUESTIONS)
        assert len(resp.json()["results"]["bindings"]) == 3

    def test_syntax_error_payload(self, client):
        resp = self.post(client, "SELECT ?s { ?s ?p }")
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "syntax_error"
        assert body["detail"]["line"] == 1
        assert body["detail"]["column"] > 1

    def test_unsupported_feature_payload(self, client):
        resp = self.post(client, "SELECT ?s { ?s ?p ?o } LIMIT 3")
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "unsupported_feature"
        assert body["detail"]["feature"] == "LIMIT"

    def test_empty_body_rejected(self, client):
        resp = self.post(client, "   \n ")
        assert resp.status_code == 422
        assert resp.json()["code"] == "syntax_error"

    def test_oversized_query_rejected(self, fixture_corpus, fixture_store):
        app = create_app(fixture_corpus, fixture_store, max_query_bytes=64)
        with TestClient(app) as small:
            resp = small.post("/api/query", content=b"SELECT ?s { ?s ?p ?o } #" + b"x" * 128)
            assert resp.status_code == 413
            assert resp.json()["code"] == "query_too_large"

    def test_timeout_maps_to_408(self, fixture_corpus, fixture_store):
        app = create_app(fixture_corpus, fixture_store, query_timeout=0.005)
        with TestClient(app) as slow:
            resp = slow.post("/api/query",
                             content=b"SELECT ?a { ?a ?p1 ?b . ?c ?p2 ?d . ?e ?p3 ?f }")
            assert resp.status_code == 408
            body = resp.json()
            assert body["code"] == "query_timeout"
            assert body["detail"]["timeoutSeconds"] == 0.005


class TestStats:
    NAMES = ["answer-positions", "categories", "choice-counts",
             "construct-matrix", "splits"]

    @pytest.mark.parametrize("name", NAMES)
    def test_each_stat_resolves(self, client, name):
        resp = client.get(f"/api/stats/{name}")
        assert resp.status_code == 200
        body = resp.json()
        assert body["name"] == name and body["data"]

    def test_splits_stat_content(self, client):
        data = client.get("/api/stats/splits").json()["data"]
        assert data["overall"] == {"counts": {"dev": 2, "train": 57}, "total": 59}

    def test_matrix_stat_content(self, client):
        data = client.get("/api/stats/construct-matrix").json()["data"]
        assert data["CycIC"]["questionTypes"] == ["MultipleChoice", "TrueFalse"]

    def test_unknown_stat_lists_available(self, client):
        resp = client.get("/api/stats/nope")
        assert resp.status_code == 404
        body = resp.json()
        assert body["code"] == "unknown_stat"
        assert body["detail"]["available"] == self.NAMES


class TestErrorEnvelope:
    def test_unknown_path_is_json(self, client):
        resp = client.get("/api/nope")
        assert resp.status_code == 404
        assert resp.json()["code"] == "not_found"

    def test_wrong_method_is_json(self, client):
        resp = client.post("/api/benchmarks")
        assert resp.status_code == 405
        assert resp.json()["code"] == "method_not_allowed"

    def test_cors_header_present(self, client):
        resp = client.get("/api/benchmarks", headers={"Origin": "http://localhost:5173"})
        assert resp.headers["access-control-allow-origin"] == "*"


class TestStaticMount:
    def test_serves_index_html(self, fixture_corpus, fixture_store, tmp_path):
        (tmp_path / "index.html").write_text("<!doctype html><title>x</title>",
                                             encoding="utf-8")
        app = create_app(fixture_corpus, fixture_store, static_dir=tmp_path)
        with TestClient(app) as c:
            assert c.get("/").status_code == 200
            assert "text/html" in c.get("/").headers["content-type"]
            # API routes keep precedence over the static mount.
            assert c.get("/api/benchmarks").status_code == 200
