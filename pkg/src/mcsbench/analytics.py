"""Corpus-level summaries computed over the canonical model.

Everything here is derived from the samples themselves except the
question-type column of the construct matrix, which is declared metadata
carried by the corpus (it cannot be inferred from converted records).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .model import BenchmarkCorpus, CanonicalSample, ConstructKind

# Display order for construct names: definition order of the vocabulary.
_CONSTRUCT_ORDER = {kind.value: i for i, kind in enumerate(ConstructKind)}


def sort_constructs(names: Iterable[str]) -> list[str]:
    return sorted(names, key=lambda n: _CONSTRUCT_ORDER.get(n, len(_CONSTRUCT_ORDER)))


@dataclass
class Distribution:
    counts: dict[str, int]
    total: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ValueError(f"counts sum to {sum(self.counts.values())}, total says {self.total}")

    @classmethod
    def tally(cls, keys: Iterable[str]) -> "Distribution":
        counts: dict[str, int] = {}
        for key in keys:
            counts[key] = counts.get(key, 0) + 1
        return cls(counts=counts, total=sum(counts.values()))

    def to_json(self) -> dict:
        return {"counts": dict(sorted(self.counts.items())), "total": self.total}


@dataclass
class Breakdown:
    """A distribution over the whole corpus and per benchmark."""

    overall: Distribution
    by_benchmark: dict[str, Distribution]

    def to_json(self) -> dict:
        return {
            "overall": self.overall.to_json(),
            "byBenchmark": {name: dist.to_json() for name, dist in sorted(self.by_benchmark.items())},
        }


def _breakdown(corpus: BenchmarkCorpus, keys_of: Callable[[CanonicalSample], Iterable[str]]) -> Breakdown:
    overall: list[str] = []
    per_bench: dict[str, list[str]] = {name: [] for name in corpus.benchmarks}
    for sample in corpus.samples:
        keys = list(keys_of(sample))
        overall.extend(keys)
        per_bench[sample.benchmark.name].extend(keys)
    return Breakdown(
        overall=Distribution.tally(overall),
        by_benchmark={name: Distribution.tally(keys) for name, keys in per_bench.items()},
    )


@dataclass(frozen=True)
class BenchmarkProfile:
    constructs: frozenset[str]
    question_types: frozenset[str]


def construct_matrix(corpus: BenchmarkCorpus) -> dict[str, BenchmarkProfile]:
    """Which constructs each benchmark exercises, plus its question types.

    Constructs are observed from the samples; question types come from
    the corpus metadata. Every registered benchmark gets a row, even one
    with no samples yet.
    """
    observed: dict[str, set[str]] = {name: set() for name in corpus.benchmarks}
    for sample in corpus.samples:
        row = observed[sample.benchmark.name]
        for seg in (*sample.inputs, *sample.choices):
            row.add(seg.construct.value)
    return {
        name: BenchmarkProfile(
            constructs=frozenset(observed[name]),
            question_types=frozenset(corpus.question_types.get(name, frozenset())),
        )
        for name in corpus.benchmarks
    }


def split_counts(corpus: BenchmarkCorpus) -> Breakdown:
    return _breakdown(corpus, lambda s: [s.split.token])


def category_distribution(corpus: BenchmarkCorpus) -> Breakdown:
    """Samples per category label; a sample counts once per category it carries."""
    return _breakdown(corpus, lambda s: sorted(c.label for c in s.categories))


def answer_position_distribution(corpus: BenchmarkCorpus) -> Breakdown:
    """Where the gold answer sits (1-based ordinal), over labeled samples."""

    def keys(sample: CanonicalSample) -> list[str]:
        if sample.correct_choice_id is None:
            return []
        for choice in sample.choices:
            if choice.id == sample.correct_choice_id:
                return [str(choice.ordinal)]
        return []

    return _breakdown(corpus, keys)


def choice_count_histogram(corpus: BenchmarkCorpus) -> Breakdown:
    return _breakdown(corpus, lambda s: [str(len(s.choices))])


def matrix_to_json(matrix: dict[str, BenchmarkProfile]) -> dict:
    return {
        name: {
            "constructs": sort_constructs(profile.constructs),
            "questionTypes": sorted(profile.question_types),
        }
        for name, profile in sorted(matrix.items())
    }


def matrix_to_text(matrix: dict[str, BenchmarkProfile]) -> str:
    rows = [("Benchmark", "Constructs", "Question types")]
    for name in sorted(matrix):
        profile = matrix[name]
        rows.append((name,
                     ", ".join(sort_constructs(profile.constructs)) or "-",
                     ", ".join(sorted(profile.question_types)) or "-"))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def breakdown_to_text(title: str, breakdown: Breakdown) -> str:
    lines = [title]
    for key, n in sorted(breakdown.overall.counts.items()):
        lines.append(f"  {key}: {n}")
    lines.append(f"  total: {breakdown.overall.total}")
    for name, dist in sorted(breakdown.by_benchmark.items()):
        if not dist.counts:
            continue
        inner = ", ".join(f"{k}: {n}" for k, n in sorted(dist.counts.items()))
        lines.append(f"  {name}: {inner}")
    return "\n".join(lines)


def breakdown_to_csv(breakdown: Breakdown) -> str:
    import csv
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scope", "key", "count"])
    for key, n in sorted(breakdown.overall.counts.items()):
        writer.writerow(["all", key, n])
    for name, dist in sorted(breakdown.by_benchmark.items()):
        for key, n in sorted(dist.counts.items()):
            writer.writerow([name, key, n])
    return buf.getvalue()


def matrix_to_csv(matrix: dict[str, BenchmarkProfile]) -> str:
    import csv
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["benchmark", "constructs", "questionTypes"])
    for name, profile in sorted(matrix.items()):
        writer.writerow([name, "; ".join(sort_constructs(profile.constructs)),
                         "; ".join(sorted(profile.question_types))])
    return buf.getvalue()
