"""Canonical in-memory model for multiple-choice commonsense benchmarks.

Every supported benchmark distribution is normalized into the same shape:
a sample owns an ordered list of input segments (what the system reads)
and an ordered list of choice segments (what the system selects among),
plus an optional pointer at the correct choice. Identifiers are minted
deterministically from the benchmark name and a per-benchmark index so
that repeated conversions of the same distribution agree byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

# Namespaces. The vocabulary namespace is a configurable default: minting
# helpers accept an override, everything else just uses the constant.
MCS = "https://w3id.org/mcs#"
SCHEMA = "http://schema.org/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"

DEFAULT_BASE_IRI = "https://w3id.org/mcs/benchmark/"

RDF_TYPE = RDF + "type"
RDFS_LABEL = RDFS + "label"
SCHEMA_TEXT = SCHEMA + "text"
SCHEMA_DATASET = SCHEMA + "dataset"

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


def is_absolute_iri(value: str) -> bool:
    return bool(_SCHEME_RE.match(value))


class SplitKind(Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"

    @property
    def token(self) -> str:
        return self.value

    @property
    def dataset_class(self) -> str:
        return MCS + "Benchmark" + self.name.capitalize() + "Dataset"

    @classmethod
    def from_token(cls, token: str) -> "SplitKind":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown split {token!r}, expected train/dev/test") from None


class ConstructKind(Enum):
    """What a segment is, in the shared benchmark vocabulary."""

    CONTEXT = "Context"
    QUESTION = "Question"
    OBSERVATION = "Observation"
    GOAL = "Goal"
    FILL_IN_THE_BLANK = "FillInTheBlank"
    ANSWER = "Answer"
    ENDING = "Ending"
    SOLUTION = "Solution"
    HYPOTHESIS = "Hypothesis"
    TRUTH_VALUE = "TruthValue"

    @property
    def is_input(self) -> bool:
        return self in _INPUT_KINDS

    @property
    def is_choice(self) -> bool:
        return self in _CHOICE_KINDS

    @property
    def class_name(self) -> str:
        return "Benchmark" + self.value

    def class_iri(self, namespace: str = MCS) -> str:
        return namespace + self.class_name

    @classmethod
    def from_name(cls, name: str) -> "ConstructKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown construct {name!r}")


_INPUT_KINDS = frozenset({
    ConstructKind.CONTEXT,
    ConstructKind.QUESTION,
    ConstructKind.OBSERVATION,
    ConstructKind.GOAL,
    ConstructKind.FILL_IN_THE_BLANK,
})
_CHOICE_KINDS = frozenset(set(ConstructKind) - _INPUT_KINDS)

SAMPLE_CLASS = MCS + "BenchmarkSample"

# Ontology class local name -> construct, for parsing @type entries.
_CLASS_TO_CONSTRUCT = {kind.class_name: kind for kind in ConstructKind}


def construct_for_class(local_name: str) -> "ConstructKind | None":
    return _CLASS_TO_CONSTRUCT.get(local_name)


@dataclass(frozen=True)
class BenchmarkId:
    """Benchmark name plus the IRI base its entities are minted under."""

    name: str
    base_iri: str = DEFAULT_BASE_IRI

    def __post_init__(self):
        if not self.name or re.search(r"\s", self.name):
            raise ValueError(f"benchmark name must be non-empty without whitespace: {self.name!r}")
        if not is_absolute_iri(self.base_iri) or not self.base_iri.endswith(("/", "#")):
            raise ValueError(f"base IRI must be absolute and end in / or #: {self.base_iri!r}")


@dataclass(frozen=True)
class ReasoningCategory:
    """A reasoning-skill tag, identified by its derived ontology class."""

    class_iri: str
    # Display label only; identity and hashing go through class_iri so a
    # category survives serialization, where just the class name is kept.
    label: str = field(compare=False)


_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


def category_to_class(label: str, namespace: str = MCS) -> ReasoningCategory:
    """Derive the ontology class for a category label.

    "logical reasoning" -> <ns>LogicalReasoning. Idempotent on labels that
    are already UpperCamelCase words.
    """
    words = label.split()
    if not words:
        raise ValueError("category label must contain at least one word")
    class_name = "".join(w[:1].upper() + w[1:] for w in words)
    return ReasoningCategory(class_iri=namespace + class_name, label=label)


def category_from_class(class_iri: str) -> ReasoningCategory:
    """Rebuild a category from its class IRI, de-camelling a display label."""
    local = class_iri.rsplit("#", 1)[-1].rsplit("/", 1)[-1]
    label = _CAMEL_BOUNDARY.sub(" ", local).lower()
    return ReasoningCategory(class_iri=class_iri, label=label)


@dataclass(frozen=True)
class InputSegment:
    id: str
    construct: ConstructKind
    text: str
    categories: frozenset[ReasoningCategory] = frozenset()


@dataclass(frozen=True)
class ChoiceSegment:
    id: str
    construct: ConstructKind
    text: str
    ordinal: int  # 1-based position


@dataclass(frozen=True)
class CanonicalSample:
    id: str
    benchmark: BenchmarkId
    split: SplitKind
    inputs: tuple[InputSegment, ...]
    choices: tuple[ChoiceSegment, ...] = ()
    correct_choice_id: str | None = None
    categories: frozenset[ReasoningCategory] = frozenset()


def mint_sample_id(benchmark: BenchmarkId, index: int) -> str:
    """Mint the sample IRI for the index-th record of a benchmark split."""
    if index < 0:
        raise ValueError(f"sample index must be >= 0, got {index}")
    return f"{benchmark.base_iri}{benchmark.name}-{index}"


def mint_segment_id(sample_id: str, role: str, position: int) -> str:
    """Mint an input/choice IRI under its sample.

    Inputs are numbered from 0, choices from 1; a choice at position 0
    signals an off-by-one in an adapter and is rejected.
    """
    if role == "input":
        if position < 0:
            raise ValueError(f"input position must be >= 0, got {position}")
    elif role == "choice":
        if position < 1:
            raise ValueError(f"choice position must be >= 1, got {position}")
    else:
        raise ValueError(f"segment role must be 'input' or 'choice', got {role!r}")
    return f"{sample_id}-{role}-{position}"


def local_name(iri: str, base_iri: str) -> str:
    """Strip a base prefix; returns the IRI unchanged if it does not match."""
    if iri.startswith(base_iri):
        return iri[len(base_iri):]
    return iri


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


NO_INPUT = "NO_INPUT"
SINGLE_CHOICE = "SINGLE_CHOICE"
BAD_ORDINALS = "BAD_ORDINALS"
EMPTY_TEXT = "EMPTY_TEXT"
WRONG_CONSTRUCT = "WRONG_CONSTRUCT"
DUPLICATE_SEGMENT_ID = "DUPLICATE_SEGMENT_ID"
SEGMENT_ID_PREFIX = "SEGMENT_ID_PREFIX"
DANGLING_CORRECT_CHOICE = "DANGLING_CORRECT_CHOICE"
MISSING_CORRECT_CHOICE = "MISSING_CORRECT_CHOICE"
CATEGORY_MISMATCH = "CATEGORY_MISMATCH"


def validate_sample(sample: CanonicalSample) -> list[Violation]:
    """Check a sample against the model invariants.

    Violations are data, not exceptions: adapters skip invalid records and
    report them, they do not crash.
    """
    out: list[Violation] = []

    if not sample.inputs:
        out.append(Violation(NO_INPUT, f"{sample.id}: sample has no input segments"))
    if len(sample.choices) == 1:
        out.append(Violation(SINGLE_CHOICE, f"{sample.id}: a single choice is not a choice"))

    ordinals = [c.ordinal for c in sample.choices]
    if ordinals != list(range(1, len(ordinals) + 1)):
        out.append(Violation(BAD_ORDINALS, f"{sample.id}: choice ordinals {ordinals} are not 1..n"))

    seen_ids: set[str] = set()
    for seg in (*sample.inputs, *sample.choices):
        if not seg.text.strip():
            out.append(Violation(EMPTY_TEXT, f"{seg.id}: segment text is empty"))
        if seg.id in seen_ids:
            out.append(Violation(DUPLICATE_SEGMENT_ID, f"{seg.id}: duplicate segment id"))
        seen_ids.add(seg.id)
        if not seg.id.startswith(sample.id + "-"):
            out.append(Violation(SEGMENT_ID_PREFIX, f"{seg.id}: not prefixed by sample id {sample.id}"))

    for seg in sample.inputs:
        if not seg.construct.is_input:
            out.append(Violation(WRONG_CONSTRUCT, f"{seg.id}: {seg.construct.value} is not an input construct"))
        if seg.categories != sample.categories:
            out.append(Violation(CATEGORY_MISMATCH, f"{seg.id}: input categories differ from sample categories"))
    for seg in sample.choices:
        if seg.construct.is_input:
            out.append(Violation(WRONG_CONSTRUCT, f"{seg.id}: {seg.construct.value} is not a choice construct"))

    if sample.correct_choice_id is not None:
        if sample.correct_choice_id not in {c.id for c in sample.choices}:
            out.append(Violation(
                DANGLING_CORRECT_CHOICE,
                f"{sample.id}: correct choice {sample.correct_choice_id} is not among the choices"))
    elif sample.split is not SplitKind.TEST:
        out.append(Violation(
            MISSING_CORRECT_CHOICE,
            f"{sample.id}: {sample.split.token} sample lacks a correct choice"))

    return out


class BenchmarkCorpus:
    """A set of benchmarks, their datasets, and their samples.

    Dataset and task IRIs are minted on registration:
    <base>{name}/{split} and <base>{name}/task.
    """

    def __init__(self):
        self.benchmarks: dict[str, BenchmarkId] = {}
        self.question_types: dict[str, frozenset[str]] = {}
        self.datasets: dict[tuple[str, SplitKind], str] = {}
        self.samples: list[CanonicalSample] = []
        self._sample_ids: set[str] = set()

    def add_benchmark(self, benchmark: BenchmarkId, question_types: frozenset[str] = frozenset()) -> None:
        known = self.benchmarks.get(benchmark.name)
        if known is not None and known != benchmark:
            raise ValueError(f"benchmark {benchmark.name} already registered with base {known.base_iri}")
        self.benchmarks[benchmark.name] = benchmark
        if question_types or benchmark.name not in self.question_types:
            self.question_types[benchmark.name] = frozenset(question_types)

    def add_sample(self, sample: CanonicalSample) -> None:
        if sample.id in self._sample_ids:
            raise ValueError(f"duplicate sample id {sample.id}")
        self.add_benchmark(sample.benchmark)
        key = (sample.benchmark.name, sample.split)
        if key not in self.datasets:
            self.datasets[key] = f"{sample.benchmark.base_iri}{sample.benchmark.name}/{sample.split.token}"
        self.samples.append(sample)
        self._sample_ids.add(sample.id)

    def has_sample(self, sample_id: str) -> bool:
        return sample_id in self._sample_ids

    def dataset_iri(self, benchmark_name: str, split: SplitKind) -> str:
        return self.datasets[(benchmark_name, split)]

    def task_iri(self, benchmark_name: str) -> str:
        bench = self.benchmarks[benchmark_name]
        return f"{bench.base_iri}{bench.name}/task"

    def splits_of(self, benchmark_name: str) -> list[SplitKind]:
        return [s for (name, s) in self.datasets if name == benchmark_name]

    def __len__(self) -> int:
        return len(self.samples)
