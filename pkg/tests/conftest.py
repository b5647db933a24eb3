"""Shared fixtures: the checked-in benchmark files, ingested corpora, and
the two workload queries used across the suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from mcsbench import adapters
from mcsbench.model import BenchmarkCorpus, SplitKind
from mcsbench.store import TripleStore, load_corpus

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

BENCH_DIRS = ["anli", "commonsenseqa", "cosmosqa", "cycic", "hellaswag", "piqa", "socialiqa"]

# Dev splits are shifted into their own index range so they can share a
# corpus with train (sample names carry no split marker).
DEV_INDEX_BASE = 1000

WORKLOAD_INPUT_TYPES = """SELECT ?sample ?input ?inputType WHERE {
 <task_uri> schema:dataset ?train .
 ?train rdf:type mcs:BenchmarkTrainDataset .
 ?train mcs:sample ?sample .
 ?sample mcs:input/schema:text ?input .
 ?sample mcs:input/rdf:type/rdfs:label ?inputType .
}"""

WORKLOAD_LOGICAL_QUESTIONS = """SELECT ?sample ?question WHERE {
 ?sample rdf:type mcs:BenchmarkSample .
 ?sample mcs:input/rdf:type mcs:LogicalReasoning .
 ?sample mcs:input ?input .
 ?input rdf:type mcs:BenchmarkQuestion .
 ?input schema:text ?question .
}"""


def input_types_query(task_iri: str) -> str:
    return WORKLOAD_INPUT_TYPES.replace("task_uri", task_iri)


def open_sources(name: str, manifest, split: SplitKind) -> dict:
    d = FIXTURES / name
    sources = {}
    for role in manifest.splits[split]:
        if role == "samples":
            sources[role] = (d / f"{split.token}.jsonl").open(encoding="utf-8")
        else:
            for suffix in ("-labels.lst", "-labels.jsonl"):
                path = d / f"{split.token}{suffix}"
                if path.exists():
                    sources[role] = path.open(encoding="utf-8")
                    break
    return sources


def ingest_fixture(name: str, split: SplitKind = SplitKind.TRAIN, index_base: int = 0):
    manifest = adapters.load_manifest(name)
    sources = open_sources(name, manifest, split)
    try:
        return adapters.ingest(manifest, split, sources, index_base=index_base)
    finally:
        for f in sources.values():
            f.close()


def build_fixture_corpus() -> BenchmarkCorpus:
    corpus = BenchmarkCorpus()
    for name in BENCH_DIRS:
        manifest = adapters.load_manifest(name)
        corpus.add_benchmark(manifest.benchmark, manifest.question_types)
        for split in manifest.splits:
            if not (FIXTURES / name / f"{split.token}.jsonl").exists():
                continue
            base = DEV_INDEX_BASE if split is SplitKind.DEV else 0
            samples, report = ingest_fixture(name, split, index_base=base)
            assert not report.skipped, f"fixture {name}/{split.token} has skips: {report}"
            for sample in samples:
                corpus.add_sample(sample)
    return corpus


def worked_example_sample():
    """The SocialIQa train sample at index 37, converted from the fixture."""
    samples, _ = ingest_fixture("socialiqa")
    return next(s for s in samples if s.id.endswith("SocialIQa-37"))


def single_sample_corpus(sample) -> BenchmarkCorpus:
    corpus = BenchmarkCorpus()
    corpus.add_sample(sample)
    return corpus


@pytest.fixture(scope="session")
def fixture_corpus() -> BenchmarkCorpus:
    return build_fixture_corpus()


@pytest.fixture(scope="session")
def fixture_store(fixture_corpus) -> TripleStore:
    store = TripleStore()
    load_corpus(store, fixture_corpus)
    return store


@pytest.fixture(scope="session")
def worked_sample():
    return worked_example_sample()
