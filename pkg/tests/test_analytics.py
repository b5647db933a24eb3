import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcsbench import analytics, model
from mcsbench.analytics import (
    BenchmarkProfile, Breakdown, Distribution, answer_position_distribution,
    category_distribution, choice_count_histogram, construct_matrix,
    matrix_to_csv, matrix_to_json, matrix_to_text, sort_constructs,
    split_counts,
)
from mcsbench.model import BenchmarkCorpus
from mcsbench.query import evaluate, parse_query

from .strategies import valid_samples

# The construct/question-type profile the seven converters must produce.
GOLDEN_MATRIX = {
    "aNLI": ({"Observation", "Hypothesis"}, {"MultipleChoice"}),
    "CommonsenseQA": ({"Question", "Answer"}, {"MultipleChoice"}),
    "CosmosQA": ({"Context", "Question", "Answer"}, {"MultipleChoice"}),
    "CycIC": ({"Question", "FillInTheBlank", "Answer", "TruthValue"},
              {"MultipleChoice", "TrueFalse"}),
    "HellaSwag": ({"Context", "Ending"}, {"MultipleChoice"}),
    "PhysicalIQa": ({"Goal", "Solution"}, {"MultipleChoice"}),
    "SocialIQa": ({"Context", "Question", "Answer"}, {"MultipleChoice"}),
}


def corpus_of(samples) -> BenchmarkCorpus:
    corpus = BenchmarkCorpus()
    for s in samples:
        corpus.add_sample(s)
    return corpus


class TestDistribution:
    def test_tally(self):
        dist = Distribution.tally(["a", "b", "a"])
        assert dist.counts == {"a": 2, "b": 1}
        assert dist.total == 3

    def test_total_mismatch_rejected(self):
        with pytest.raises(ValueError, match="total"):
            Distribution(counts={"a": 2}, total=3)

    def test_json_sorted(self):
        dist = Distribution.tally(["b", "a"])
        assert list(dist.to_json()["counts"]) == ["a", "b"]

    @settings(max_examples=30)
    @given(st.lists(valid_samples(), max_size=6,
                    unique_by=lambda s: s.id))
    def test_every_breakdown_sums_to_its_total(self, samples):
        corpus = corpus_of(samples)
        for breakdown in (split_counts(corpus), category_distribution(corpus),
                          answer_position_distribution(corpus),
                          choice_count_histogram(corpus)):
            assert sum(breakdown.overall.counts.values()) == breakdown.overall.total
            merged: dict[str, int] = {}
            for dist in breakdown.by_benchmark.values():
                for key, n in dist.counts.items():
                    merged[key] = merged.get(key, 0) + n
            assert merged == breakdown.overall.counts


class TestConstructMatrix:
    def test_fixture_corpus_matches_golden(self, fixture_corpus):
        matrix = construct_matrix(fixture_corpus)
        expected = {name: BenchmarkProfile(frozenset(cs), frozenset(qs))
                    for name, (cs, qs) in GOLDEN_MATRIX.items()}
        assert matrix == expected

    def test_benchmark_without_samples_gets_empty_row(self, worked_sample):
        corpus = corpus_of([worked_sample])
        corpus.add_benchmark(model.BenchmarkId("Empty"), frozenset({"MultipleChoice"}))
        matrix = construct_matrix(corpus)
        assert matrix["Empty"] == BenchmarkProfile(frozenset(),
                                                   frozenset({"MultipleChoice"}))

    def test_sort_constructs_uses_vocabulary_order(self):
        shuffled = ["Answer", "Context", "Question", "Observation"]
        assert sort_constructs(shuffled) == ["Context", "Question",
                                             "Observation", "Answer"]


class TestFixtureBreakdowns:
    def test_split_counts(self, fixture_corpus):
        counts = split_counts(fixture_corpus)
        assert counts.overall.counts == {"train": 57, "dev": 2}
        assert counts.by_benchmark["SocialIQa"].counts == {"train": 38, "dev": 2}

    def test_category_distribution(self, fixture_corpus):
        dist = category_distribution(fixture_corpus)
        assert dist.overall.counts == {"logical reasoning": 3}
        assert dist.by_benchmark["CycIC"].counts == {"logical reasoning": 3}
        assert dist.by_benchmark["SocialIQa"].counts == {}

    def test_answer_positions_cover_labeled_samples(self, fixture_corpus):
        dist = answer_position_distribution(fixture_corpus)
        labeled = sum(1 for s in fixture_corpus.samples
                      if s.correct_choice_id is not None)
        assert dist.overall.total == labeled == len(fixture_corpus)

    def test_choice_count_histogram(self, fixture_corpus):
        dist = choice_count_histogram(fixture_corpus)
        assert dist.by_benchmark["SocialIQa"].counts == {"3": 40}
        assert dist.by_benchmark["CycIC"].counts == {"2": 1, "3": 1, "4": 3}
        assert dist.overall.total == len(fixture_corpus)


class TestStoreAgreement:
    """The same numbers must fall out of the triple store as out of the
    canonical model; the two pipelines share no aggregation code."""

    def rows(self, store, text):
        return evaluate(parse_query(text), store).rows

    def test_split_counts_match_store(self, fixture_corpus, fixture_store):
        counts = split_counts(fixture_corpus).overall.counts
        for token, expected in counts.items():
            cls = f"mcs:Benchmark{token.capitalize()}Dataset"
            rows = self.rows(fixture_store,
                             f"SELECT ?s {{ ?d rdf:type {cls} . ?d mcs:sample ?s }}")
            assert len(rows) == expected, token

    def test_category_counts_match_store(self, fixture_corpus, fixture_store):
        dist = category_distribution(fixture_corpus).overall.counts
        for label, expected in dist.items():
            cat = model.category_to_class(label)
            rows = self.rows(fixture_store,
                             f"SELECT DISTINCT ?s {{ ?s mcs:input/rdf:type <{cat.class_iri}> }}")
            assert len(rows) == expected, label

    def test_labeled_sample_count_matches_store(self, fixture_corpus, fixture_store):
        labeled = answer_position_distribution(fixture_corpus).overall.total
        rows = self.rows(fixture_store, "SELECT ?s ?c { ?s mcs:correctChoice ?c }")
        assert len(rows) == labeled

    def test_construct_usage_matches_store(self, fixture_corpus, fixture_store):
        matrix = construct_matrix(fixture_corpus)
        for name, profile in matrix.items():
            task = fixture_corpus.task_iri(name)
            rows = self.rows(fixture_store, f"""
                SELECT DISTINCT ?label {{
                  <{task}> schema:dataset ?d .
                  ?d mcs:sample ?s .
                  ?s mcs:input/rdf:type/rdfs:label ?label .
                  ?s mcs:choice/rdf:type/rdfs:label ?choiceLabel .
                }}""")
            seen = {row[0].value.removeprefix("Benchmark") for row in rows}
            inputs_only = {c for c in profile.constructs
                           if model.ConstructKind(c).is_input}
            # Category classes label differently, so filter to constructs.
            assert seen & inputs_only == inputs_only, name


class TestRendering:
    def test_matrix_json_shape(self, fixture_corpus):
        doc = matrix_to_json(construct_matrix(fixture_corpus))
        assert list(doc) == sorted(GOLDEN_MATRIX)
        assert doc["CycIC"]["constructs"] == ["Question", "FillInTheBlank",
                                              "Answer", "TruthValue"]
        assert doc["CycIC"]["questionTypes"] == ["MultipleChoice", "TrueFalse"]

    def test_matrix_text_alignment(self, fixture_corpus):
        text = matrix_to_text(construct_matrix(fixture_corpus))
        lines = text.splitlines()
        assert lines[0].startswith("Benchmark")
        assert len(lines) == 2 + len(GOLDEN_MATRIX)
        assert set(lines[1]) <= {"-", " "}

    def test_matrix_csv(self, fixture_corpus):
        lines = matrix_to_csv(construct_matrix(fixture_corpus)).splitlines()
        assert lines[0] == "benchmark,constructs,questionTypes"
        assert len(lines) == 1 + len(GOLDEN_MATRIX)

    def test_breakdown_text_and_csv(self, fixture_corpus):
        counts = split_counts(fixture_corpus)
        text = analytics.breakdown_to_text("Samples per split", counts)
        assert text.splitlines()[0] == "Samples per split"
        assert "  train: 57" in text.splitlines()
        csv_lines = analytics.breakdown_to_csv(counts).splitlines()
        assert csv_lines[0] == "scope,key,count"
        assert "all,train,57" in csv_lines

    def test_empty_matrix_renders(self):
        corpus = BenchmarkCorpus()
        corpus.add_benchmark(model.BenchmarkId("Solo"), frozenset())
        text = matrix_to_text(construct_matrix(corpus))
        assert "Solo" in text and "-" in text.splitlines()[2]
