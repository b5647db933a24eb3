import dataclasses
import json

import pytest
from hypothesis import given, settings

from mcsbench import jsonld, model
from mcsbench.jsonld import (
    InvalidSampleError, JsonLdError, emit_context, expand_to_triples,
    from_jsonld, sample_scoped_triples, to_jsonld, vocabulary_triples,
)
from mcsbench.model import BenchmarkCorpus, BenchmarkId, SplitKind
from mcsbench.store import TripleStore, load_corpus

from . import jsonld_oracle
from .conftest import single_sample_corpus
from .strategies import valid_samples

GOLDEN = {
    "@context": "https://w3id.org/mcs/benchmark/context.jsonld",
    "@id": "SocialIQa-37",
    "@type": "BenchmarkSample",
    "includedInDataset": "SocialIQa/train",
    "input": [
        {
            "@id": "SocialIQa-37-input-0",
            "@type": "BenchmarkContext",
            "text": "Skylar returned early in the evening after a night and day of partying.",
        },
        {
            "@id": "SocialIQa-37-input-1",
            "@type": "BenchmarkQuestion",
            "text": "How would you describe Skylar?",
        },
    ],
    "choice": [
        {"@id": "SocialIQa-37-choice-1", "@type": "BenchmarkAnswer", "text": "a party girl"},
        {"@id": "SocialIQa-37-choice-2", "@type": "BenchmarkAnswer", "text": "very shy"},
        {"@id": "SocialIQa-37-choice-3", "@type": "BenchmarkAnswer", "text": "exhausted"},
    ],
    "correctChoice": {"@id": "SocialIQa-37-choice-1"},
}


def triple_count(sample) -> int:
    # 1 type + includedInDataset both ways + per input (link, type, text,
    # one type per category) + per choice (link, type, text) + correct link.
    n = 1 + 2
    n += sum(3 + len(seg.categories) for seg in sample.inputs)
    n += 3 * len(sample.choices)
    if sample.correct_choice_id is not None:
        n += 1
    return n


class TestSerialization:
    def test_worked_example_matches_golden(self, worked_sample):
        doc = to_jsonld(worked_sample)
        assert doc == GOLDEN
        assert list(doc) == list(GOLDEN)
        assert [list(node) for node in doc["input"]] == [["@id", "@type", "text"]] * 2

    def test_golden_is_plain_json(self, worked_sample):
        text = json.dumps(to_jsonld(worked_sample), ensure_ascii=False)
        assert json.loads(text) == GOLDEN

    def test_invalid_sample_rejected(self, worked_sample):
        broken = dataclasses.replace(worked_sample, inputs=())
        with pytest.raises(InvalidSampleError, match="NO_INPUT"):
            to_jsonld(broken)

    def test_test_split_without_label_omits_correct_choice(self, worked_sample):
        s = dataclasses.replace(worked_sample, split=SplitKind.TEST, correct_choice_id=None)
        doc = to_jsonld(s)
        assert "correctChoice" not in doc
        assert doc["includedInDataset"] == "SocialIQa/test"

    def test_zero_choice_sample_omits_choice_key(self, worked_sample):
        s = dataclasses.replace(worked_sample, split=SplitKind.TEST,
                                choices=(), correct_choice_id=None)
        doc = to_jsonld(s)
        assert "choice" not in doc

    def test_categories_become_extra_types(self):
        cats = frozenset({model.category_to_class("logical reasoning")})
        bench = BenchmarkId("CycIC")
        sid = model.mint_sample_id(bench, 0)
        sample = model.CanonicalSample(
            id=sid, benchmark=bench, split=SplitKind.TEST,
            inputs=(model.InputSegment(model.mint_segment_id(sid, "input", 0),
                                       model.ConstructKind.QUESTION, "why?", cats),),
            categories=cats)
        doc = to_jsonld(sample)
        assert doc["input"][0]["@type"] == ["BenchmarkQuestion", "LogicalReasoning"]


class TestRoundTrip:
    @settings(max_examples=80)
    @given(valid_samples())
    def test_identity(self, sample):
        assert from_jsonld(to_jsonld(sample)) == sample

    def test_non_default_base_with_explicit_argument(self):
        bench = BenchmarkId("Demo", "https://data.example.org/d/")
        sid = model.mint_sample_id(bench, 3)
        sample = model.CanonicalSample(
            id=sid, benchmark=bench, split=SplitKind.TEST,
            inputs=(model.InputSegment(model.mint_segment_id(sid, "input", 0),
                                       model.ConstructKind.GOAL, "win", frozenset()),))
        doc = to_jsonld(sample)
        assert doc["@id"] == "Demo-3"
        assert from_jsonld(doc, base_iri=bench.base_iri) == sample

    def test_absolute_ids_round_trip_without_base(self):
        bench = BenchmarkId("Demo", "https://data.example.org/d/")
        sid = model.mint_sample_id(bench, 3)
        sample = model.CanonicalSample(
            id=sid, benchmark=bench, split=SplitKind.TEST,
            inputs=(model.InputSegment(model.mint_segment_id(sid, "input", 0),
                                       model.ConstructKind.GOAL, "win", frozenset()),))
        # Compacting against an unrelated base leaves ids absolute.
        doc = to_jsonld(sample, base_iri=model.DEFAULT_BASE_IRI)
        assert doc["@id"] == sid
        assert from_jsonld(doc) == sample

    def test_split_recovered_from_dataset_suffix(self, worked_sample):
        for split in SplitKind:
            s = dataclasses.replace(worked_sample, split=split,
                                    correct_choice_id=worked_sample.correct_choice_id
                                    if split is not SplitKind.TEST else None)
            assert from_jsonld(to_jsonld(s)).split is split

    def test_correct_choice_as_plain_string(self, worked_sample):
        doc = to_jsonld(worked_sample)
        doc["correctChoice"] = doc["correctChoice"]["@id"]
        assert from_jsonld(doc) == worked_sample


class TestFromJsonLdErrors:
    def base_doc(self, worked_sample):
        return to_jsonld(worked_sample)

    def test_missing_input(self, worked_sample):
        doc = self.base_doc(worked_sample)
        del doc["input"]
        with pytest.raises(JsonLdError, match="missing input"):
            from_jsonld(doc)

    def test_unknown_type_named(self, worked_sample):
        doc = self.base_doc(worked_sample)
        doc["@type"] = "BenchmarkMystery"
        with pytest.raises(JsonLdError, match="BenchmarkMystery"):
            from_jsonld(doc)

    def test_unknown_benchmark_class_on_input(self, worked_sample):
        doc = self.base_doc(worked_sample)
        doc["input"][0]["@type"] = "BenchmarkMystery"
        with pytest.raises(JsonLdError, match="BenchmarkMystery"):
            from_jsonld(doc)

    def test_conflicting_constructs(self, worked_sample):
        doc = self.base_doc(worked_sample)
        doc["input"][0]["@type"] = ["BenchmarkContext", "BenchmarkQuestion"]
        with pytest.raises(JsonLdError, match="conflicting"):
            from_jsonld(doc)

    def test_choice_construct_in_input_position(self, worked_sample):
        doc = self.base_doc(worked_sample)
        doc["input"][0]["@type"] = "BenchmarkAnswer"
        with pytest.raises(JsonLdError, match="not an input construct"):
            from_jsonld(doc)

    def test_dangling_correct_choice(self, worked_sample):
        doc = self.base_doc(worked_sample)
        doc["correctChoice"] = {"@id": "SocialIQa-37-choice-9"}
        with pytest.raises(JsonLdError, match="choice-9"):
            from_jsonld(doc)

    def test_dataset_without_split_suffix(self, worked_sample):
        doc = self.base_doc(worked_sample)
        doc["includedInDataset"] = "SocialIQa/full"
        with pytest.raises(JsonLdError, match="train/dev/test"):
            from_jsonld(doc)

    def test_missing_id(self, worked_sample):
        doc = self.base_doc(worked_sample)
        del doc["@id"]
        with pytest.raises(JsonLdError, match="@id"):
            from_jsonld(doc)

    def test_missing_text(self, worked_sample):
        doc = self.base_doc(worked_sample)
        del doc["input"][0]["text"]
        with pytest.raises(JsonLdError, match="text"):
            from_jsonld(doc)


class TestExpansion:
    def test_worked_example_counts(self, worked_sample):
        corpus = single_sample_corpus(worked_sample)
        assert len(sample_scoped_triples(worked_sample, corpus)) == 19
        assert len(expand_to_triples(worked_sample, corpus)) == 21

    def test_minimal_sample_counts(self):
        bench = BenchmarkId("Demo")
        sid = model.mint_sample_id(bench, 0)
        sample = model.CanonicalSample(
            id=sid, benchmark=bench, split=SplitKind.TEST,
            inputs=(model.InputSegment(model.mint_segment_id(sid, "input", 0),
                                       model.ConstructKind.CONTEXT, "x", frozenset()),))
        corpus = single_sample_corpus(sample)
        assert len(sample_scoped_triples(sample, corpus)) == 6

    @settings(max_examples=80)
    @given(valid_samples())
    def test_count_formula(self, sample):
        corpus = single_sample_corpus(sample)
        triples = expand_to_triples(sample, corpus)
        assert len(triples) == len(set(triples))
        assert len(triples) == triple_count(sample) + 2

    def test_unregistered_sample_rejected(self, worked_sample):
        with pytest.raises(ValueError, match="not registered"):
            expand_to_triples(worked_sample, BenchmarkCorpus())

    def test_vocabulary_labels(self, worked_sample):
        cats = frozenset({model.category_to_class("logical reasoning")})
        bench = BenchmarkId("CycIC")
        sid = model.mint_sample_id(bench, 0)
        sample = model.CanonicalSample(
            id=sid, benchmark=bench, split=SplitKind.TRAIN,
            inputs=(model.InputSegment(model.mint_segment_id(sid, "input", 0),
                                       model.ConstructKind.QUESTION, "why?", cats),),
            choices=(model.ChoiceSegment(model.mint_segment_id(sid, "choice", 1),
                                         model.ConstructKind.ANSWER, "because", 1),
                     model.ChoiceSegment(model.mint_segment_id(sid, "choice", 2),
                                         model.ConstructKind.ANSWER, "why not", 2)),
            correct_choice_id=model.mint_segment_id(sid, "choice", 1),
            categories=cats)
        corpus = single_sample_corpus(sample)
        labels = {(s.value, o.value) for s, _, o in vocabulary_triples(corpus)}
        assert (model.MCS + "BenchmarkQuestion", "BenchmarkQuestion") in labels
        assert (model.MCS + "LogicalReasoning", "logical reasoning") in labels
        assert (model.MCS + "BenchmarkTrainDataset", "BenchmarkTrainDataset") in labels
        assert (model.SAMPLE_CLASS, "BenchmarkSample") in labels


class TestOracleAgreement:
    """The compact doc, expanded by an independent mini processor, must
    say exactly what the model-level expansion says about the sample
    (minus the materialized inverse edge, which the document omits)."""

    @staticmethod
    def production_view(sample):
        corpus = single_sample_corpus(sample)
        return {
            tuple(jsonld_oracle.term_tuple(t) for t in triple)
            for triple in sample_scoped_triples(sample, corpus)
            if triple[1].value != jsonld.MCS_SAMPLE
        }

    def test_worked_example(self, worked_sample):
        got = jsonld_oracle.expand(to_jsonld(worked_sample), emit_context())
        assert got == self.production_view(worked_sample)

    @settings(max_examples=80)
    @given(valid_samples())
    def test_generated_samples(self, sample):
        got = jsonld_oracle.expand(to_jsonld(sample), emit_context())
        assert got == self.production_view(sample)


class TestContext:
    def test_stable_bytes(self):
        assert jsonld.context_json() == jsonld.context_json()
        assert json.loads(jsonld.context_json())["@context"]["@base"] == model.DEFAULT_BASE_IRI

    def test_reference_properties_typed_as_id(self):
        ctx = emit_context()["@context"]
        assert ctx["includedInDataset"] == {"@id": "mcs:includedInDataset", "@type": "@id"}
        assert ctx["correctChoice"] == {"@id": "mcs:correctChoice", "@type": "@id"}

    def test_every_document_key_is_mapped(self, worked_sample):
        ctx = emit_context()["@context"]
        doc = to_jsonld(worked_sample)
        keys = {k for k in doc if not k.startswith("@")}
        for node in (*doc["input"], *doc["choice"]):
            keys |= {k for k in node if not k.startswith("@")}
        for key in keys:
            assert key in ctx, f"context lacks a term for {key}"

    def test_text_maps_to_schema_org(self):
        ctx = emit_context()["@context"]
        assert ctx["text"] == "schema:text"
        assert ctx["schema"] == "http://schema.org/"


class TestCorpusDir:
    def test_write_then_load_round_trip(self, tmp_path, fixture_corpus):
        out = tmp_path / "corpus"
        paths = jsonld.write_corpus_dir(out, fixture_corpus)
        assert (out / "context.jsonld") in paths
        assert (out / "corpus.json") in paths
        loaded = jsonld.load_corpus_dir(out)
        assert set(loaded.benchmarks) == set(fixture_corpus.benchmarks)
        assert loaded.question_types == fixture_corpus.question_types
        assert sorted(s.id for s in loaded.samples) == sorted(s.id for s in fixture_corpus.samples)
        assert {s.id: s for s in loaded.samples} == {s.id: s for s in fixture_corpus.samples}

    def test_existing_split_file_needs_force(self, tmp_path, worked_sample):
        corpus = single_sample_corpus(worked_sample)
        jsonld.write_corpus_dir(tmp_path, corpus)
        with pytest.raises(FileExistsError):
            jsonld.write_corpus_dir(tmp_path, corpus)
        jsonld.write_corpus_dir(tmp_path, corpus, force=True)

    def test_ntriples_export_written(self, tmp_path, worked_sample):
        corpus = single_sample_corpus(worked_sample)
        jsonld.write_corpus_dir(tmp_path, corpus, fmt="both")
        nt = (tmp_path / "SocialIQa" / "train.nt").read_text(encoding="utf-8")
        store = TripleStore()
        store.load_ntriples(nt)
        full = TripleStore()
        load_corpus(full, corpus)
        assert store.export_ntriples() == full.export_ntriples()

    def test_loading_missing_directory_fails(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            jsonld.load_corpus_dir(tmp_path / "nope")
