"""Manifest-driven conversion of native benchmark files into the model.

A mapping manifest says, per benchmark, which record fields become input
and choice segments, what construct each one carries, how splits map to
files, and how the gold label is encoded. Adapters never guess: anything
a manifest does not declare is not read, and records that do not satisfy
the model invariants are skipped and reported, not repaired.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Mapping

from . import model
from .model import (
    BenchmarkCorpus, BenchmarkId, CanonicalSample, ChoiceSegment,
    ConstructKind, InputSegment, SplitKind,
)

QUESTION_TYPES = frozenset({"MultipleChoice", "TrueFalse"})
ENCODINGS = frozenset({"zero-based", "one-based", "letter", "text", "boolean"})
FILE_ROLES = ("samples", "labels")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructOverride:
    when: str        # record field to test
    equals: object   # value that triggers the override
    construct: ConstructKind


@dataclass(frozen=True)
class FieldRule:
    path: str
    role: str  # input | choice | category
    construct: ConstructKind | None = None
    optional: bool = False
    overrides: tuple[ConstructOverride, ...] = ()

    @property
    def is_list(self) -> bool:
        return "[]" in self.path

    def construct_for(self, record: dict) -> ConstructKind:
        for ov in self.overrides:
            found, values = resolve_path(record, ov.when)
            if found and values and values[0] == ov.equals:
                return ov.construct
        return self.construct


@dataclass(frozen=True)
class LabelRule:
    encoding: str
    path: str | None = None


@dataclass(frozen=True)
class MappingManifest:
    benchmark: BenchmarkId
    question_types: frozenset[str]
    splits: dict
    fields: tuple[FieldRule, ...]
    label: LabelRule
    index: str | None = None

    @property
    def input_rules(self) -> tuple[FieldRule, ...]:
        return tuple(r for r in self.fields if r.role == "input")

    @property
    def choice_rules(self) -> tuple[FieldRule, ...]:
        return tuple(r for r in self.fields if r.role == "choice")

    @property
    def category_rules(self) -> tuple[FieldRule, ...]:
        return tuple(r for r in self.fields if r.role == "category")


def resolve_path(record: dict, path: str) -> tuple[bool, list]:
    """Walk a dotted path; '[]' on a segment fans out over a JSON array.

    Returns (found, values): found is False when any segment is absent or
    an expected array is not one. A path without '[]' yields one value.
    """
    values = [record]
    for seg in path.split("."):
        fan_out = seg.endswith("[]")
        key = seg[:-2] if fan_out else seg
        nxt = []
        for obj in values:
            if not isinstance(obj, dict) or key not in obj:
                return False, []
            val = obj[key]
            if fan_out:
                if not isinstance(val, list):
                    return False, []
                nxt.extend(val)
            else:
                nxt.append(val)
        values = nxt
    return True, values


def _parse_construct(name: object, where: str, role: str) -> ConstructKind:
    if not isinstance(name, str):
        raise ManifestError(f"{where}: construct must be a string")
    try:
        kind = ConstructKind.from_name(name)
    except ValueError as exc:
        raise ManifestError(f"{where}: {exc}") from None
    if role == "input" and not kind.is_input:
        raise ManifestError(f"{where}: {name} is not an input construct")
    if role == "choice" and not kind.is_choice:
        raise ManifestError(f"{where}: {name} is not a choice construct")
    return kind


_RULE_KEYS = {"path", "role", "construct", "optional", "overrides"}
_TOP_KEYS = {"benchmark", "baseIri", "questionTypes", "splits", "fields", "label", "index"}


def parse_manifest(data: dict, origin: str = "manifest") -> MappingManifest:
    if not isinstance(data, dict):
        raise ManifestError(f"{origin}: manifest must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ManifestError(f"{origin}: unknown keys {sorted(unknown)}")
    try:
        bench = BenchmarkId(data.get("benchmark", ""), data.get("baseIri", model.DEFAULT_BASE_IRI))
    except ValueError as exc:
        raise ManifestError(f"{origin}: {exc}") from None

    qtypes = data.get("questionTypes", [])
    if not isinstance(qtypes, list) or not qtypes or not set(qtypes) <= QUESTION_TYPES:
        raise ManifestError(f"{origin}: questionTypes must be a non-empty subset of {sorted(QUESTION_TYPES)}")

    raw_splits = data.get("splits", {})
    if not isinstance(raw_splits, dict) or not raw_splits:
        raise ManifestError(f"{origin}: splits must map split names to file role lists")
    splits: dict[SplitKind, tuple[str, ...]] = {}
    for token, roles in raw_splits.items():
        try:
            split = SplitKind.from_token(token)
        except ValueError as exc:
            raise ManifestError(f"{origin}: {exc}") from None
        if (not isinstance(roles, list) or not roles or roles[0] != "samples"
                or not set(roles) <= set(FILE_ROLES) or len(roles) != len(set(roles))):
            raise ManifestError(f"{origin}: split {token}: file roles must be ['samples'] or ['samples', 'labels']")
        splits[split] = tuple(roles)

    raw_fields = data.get("fields")
    if not isinstance(raw_fields, list) or not raw_fields:
        raise ManifestError(f"{origin}: fields must be a non-empty list")
    rules: list[FieldRule] = []
    for i, raw in enumerate(raw_fields):
        where = f"{origin}: fields[{i}]"
        if not isinstance(raw, dict):
            raise ManifestError(f"{where}: rule must be an object")
        if set(raw) - _RULE_KEYS:
            raise ManifestError(f"{where}: unknown keys {sorted(set(raw) - _RULE_KEYS)}")
        path = raw.get("path")
        if not isinstance(path, str) or not path:
            raise ManifestError(f"{where}: path is required")
        role = raw.get("role")
        if role not in ("input", "choice", "category"):
            raise ManifestError(f"{where}: role must be input, choice or category")
        construct = None
        overrides: list[ConstructOverride] = []
        if role == "category":
            if "construct" in raw or "overrides" in raw:
                raise ManifestError(f"{where}: category rules take no construct")
        else:
            construct = _parse_construct(raw.get("construct"), where, role)
            for j, ov in enumerate(raw.get("overrides", [])):
                if not isinstance(ov, dict) or set(ov) != {"when", "equals", "construct"}:
                    raise ManifestError(f"{where}: overrides[{j}] needs exactly when/equals/construct")
                overrides.append(ConstructOverride(
                    when=ov["when"], equals=ov["equals"],
                    construct=_parse_construct(ov["construct"], f"{where}: overrides[{j}]", role)))
        rules.append(FieldRule(path=path, role=role, construct=construct,
                               optional=bool(raw.get("optional", False)), overrides=tuple(overrides)))

    if not any(r.role == "input" for r in rules):
        raise ManifestError(f"{origin}: at least one input rule is required")
    choice_rules = [r for r in rules if r.role == "choice"]
    if not (len(choice_rules) >= 2 or any(r.is_list for r in choice_rules)):
        raise ManifestError(f"{origin}: need two choice rules or one list-valued choice rule")

    raw_label = data.get("label")
    if not isinstance(raw_label, dict) or raw_label.get("encoding") not in ENCODINGS:
        raise ManifestError(f"{origin}: label.encoding must be one of {sorted(ENCODINGS)}")
    label = LabelRule(encoding=raw_label["encoding"], path=raw_label.get("path"))

    index = data.get("index")
    if index is not None and (not isinstance(index, str) or not index):
        raise ManifestError(f"{origin}: index must be a field name")

    return MappingManifest(benchmark=bench, question_types=frozenset(qtypes),
                           splits=splits, fields=tuple(rules), label=label, index=index)


def _manifest_dir():
    return resources.files("mcsbench") / "manifests"


def shipped_manifest_names() -> list[str]:
    return sorted(p.name[:-5] for p in _manifest_dir().iterdir() if p.name.endswith(".json"))


def load_manifest(ref: str | Path) -> MappingManifest:
    """Load a manifest from a path, or by shipped name (e.g. 'socialiqa')."""
    ref_str = str(ref)
    if "/" not in ref_str and not ref_str.endswith(".json"):
        candidate = _manifest_dir() / f"{ref_str}.json"
        if not candidate.is_file():
            raise ManifestError(f"no shipped manifest named {ref_str!r} (have: {', '.join(shipped_manifest_names())})")
        return parse_manifest(json.loads(candidate.read_text(encoding="utf-8")), origin=ref_str)
    path = Path(ref)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON: {exc}") from None
    return parse_manifest(data, origin=str(path))


def shipped_manifests() -> list[MappingManifest]:
    return [load_manifest(name) for name in shipped_manifest_names()]


@dataclass(frozen=True)
class SkippedRecord:
    line: int  # 0-based line number in the samples file
    reason: str


@dataclass
class IngestReport:
    benchmark: str
    split: str
    records: int = 0
    emitted: int = 0
    skipped: list = field(default_factory=list)

    def skip(self, line: int, reason: str) -> None:
        self.skipped.append(SkippedRecord(line, reason))

    def __str__(self) -> str:
        head = (f"{self.benchmark}/{self.split}: {self.emitted} of {self.records} "
                f"records converted, {len(self.skipped)} skipped")
        if not self.skipped:
            return head
        shown = [f"  line {s.line}: {s.reason}" for s in self.skipped[:20]]
        if len(self.skipped) > 20:
            shown.append(f"  ... and {len(self.skipped) - 20} more")
        return "\n".join([head, *shown])


def _read_lines(source: "IO | Iterable[str]") -> list[str]:
    data = source.read() if hasattr(source, "read") else None
    if data is None:
        return [str(line) for line in source]
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _decode_label(value, rule: LabelRule, choices: list[ChoiceSegment]) -> "str | None":
    """Turn an encoded gold label into the id of the choice it names."""
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError:
            value = value.strip()
    if rule.path is not None and isinstance(value, dict):
        found, values = resolve_path(value, rule.path)
        if not found or not values:
            return None
        value = values[0]

    enc = rule.encoding
    if enc in ("zero-based", "one-based"):
        if isinstance(value, str) and value.lstrip("-").isdigit():
            value = int(value)
        if not isinstance(value, int) or isinstance(value, bool):
            return None
        ordinal = value + 1 if enc == "zero-based" else value
    elif enc == "letter":
        if not isinstance(value, str) or len(value.strip()) != 1 or not value.strip().isalpha():
            return None
        ordinal = ord(value.strip().upper()) - ord("A") + 1
    elif enc == "boolean":
        if isinstance(value, bool):
            value = "true" if value else "false"
        if not isinstance(value, str):
            return None
        wanted = value.strip().lower()
        matches = [c for c in choices if c.text.strip().lower() == wanted]
        return matches[0].id if len(matches) == 1 else None
    else:  # text
        if not isinstance(value, str):
            return None
        wanted = value.strip()
        matches = [c for c in choices if c.text.strip() == wanted]
        return matches[0].id if len(matches) == 1 else None

    if not 1 <= ordinal <= len(choices):
        return None
    return choices[ordinal - 1].id


def ingest(manifest: MappingManifest, split: SplitKind,
           sources: Mapping[str, "IO | Iterable[str]"],
           index_base: int = 0) -> tuple[list[CanonicalSample], IngestReport]:
    """Convert one split's native files into canonical samples.

    sources maps file roles to open streams, matching the manifest's
    declared layout for the split. Sample indices are 0-based physical
    line numbers of the samples file unless the manifest names a stable
    in-record id field; label files pair with samples line by line.

    Sample names carry no split marker, so two splits of one benchmark
    numbered from their own line 0 would mint the same ids. index_base
    shifts this split's line numbering into a disjoint range when the
    converted splits are meant to live in one corpus.
    """
    if split not in manifest.splits:
        raise ManifestError(f"{manifest.benchmark.name} declares no {split.token} split")
    layout = manifest.splits[split]
    if set(sources) != set(layout):
        raise ManifestError(f"{manifest.benchmark.name}/{split.token} expects files {list(layout)}, got {sorted(sources)}")

    sample_lines = _read_lines(sources["samples"])
    label_lines = _read_lines(sources["labels"]) if "labels" in layout else None

    report = IngestReport(benchmark=manifest.benchmark.name, split=split.token)
    samples: list[CanonicalSample] = []
    minted: set[str] = set()

    for line_no, raw in enumerate(sample_lines):
        report.records += 1
        if not raw.strip():
            report.skip(line_no, "blank line")
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            report.skip(line_no, f"invalid JSON: {exc.msg}")
            continue
        if not isinstance(record, dict):
            report.skip(line_no, "record is not a JSON object")
            continue

        index = index_base + line_no
        if manifest.index is not None:
            found, values = resolve_path(record, manifest.index)
            if not found or not isinstance(values[0], int) or isinstance(values[0], bool) or values[0] < 0:
                report.skip(line_no, f"missing or invalid id field {manifest.index!r}")
                continue
            index = values[0]
        sample_id = model.mint_sample_id(manifest.benchmark, index)
        if sample_id in minted:
            report.skip(line_no, f"duplicate sample index {index}")
            continue

        categories: set[model.ReasoningCategory] = set()
        bad = None
        for rule in manifest.category_rules:
            found, values = resolve_path(record, rule.path)
            if not found:
                if not rule.optional:
                    bad = f"missing field {rule.path!r}"
                    break
                continue
            for value in values:
                if not isinstance(value, str) or not value.strip():
                    bad = f"category value under {rule.path!r} is not text"
                    break
                categories.add(model.category_to_class(value.strip()))
            if bad:
                break
        if bad:
            report.skip(line_no, bad)
            continue
        catset = frozenset(categories)

        inputs: list[InputSegment] = []
        for rule in manifest.input_rules:
            found, values = resolve_path(record, rule.path)
            if not found or not values or values == [""]:
                if rule.optional:
                    continue
                bad = f"missing field {rule.path!r}"
                break
            construct = rule.construct_for(record)
            for value in values:
                if not isinstance(value, str):
                    bad = f"field {rule.path!r} is not text"
                    break
                inputs.append(InputSegment(
                    id=model.mint_segment_id(sample_id, "input", len(inputs)),
                    construct=construct, text=value, categories=catset))
            if bad:
                break
        if bad:
            report.skip(line_no, bad)
            continue

        choices: list[ChoiceSegment] = []
        for rule in manifest.choice_rules:
            found, values = resolve_path(record, rule.path)
            if not found or not values or values == [""]:
                if rule.optional:
                    continue
                bad = f"missing field {rule.path!r}"
                break
            construct = rule.construct_for(record)
            for value in values:
                if not isinstance(value, str):
                    bad = f"field {rule.path!r} is not text"
                    break
                ordinal = len(choices) + 1
                choices.append(ChoiceSegment(
                    id=model.mint_segment_id(sample_id, "choice", ordinal),
                    construct=construct, text=value, ordinal=ordinal))
            if bad:
                break
        if bad:
            report.skip(line_no, bad)
            continue

        label_value = None
        if label_lines is not None:
            if line_no < len(label_lines) and label_lines[line_no].strip():
                label_value = label_lines[line_no]
        else:
            if manifest.label.path is not None:
                found, values = resolve_path(record, manifest.label.path)
                if found and values:
                    label_value = values[0]

        correct = None
        if label_value is not None:
            correct = _decode_label(label_value, manifest.label, choices)
            if correct is None:
                report.skip(line_no, f"label {label_value!r} does not decode to a choice")
                continue
        elif split is not SplitKind.TEST:
            report.skip(line_no, "missing label")
            continue

        sample = CanonicalSample(
            id=sample_id, benchmark=manifest.benchmark, split=split,
            inputs=tuple(inputs), choices=tuple(choices),
            correct_choice_id=correct, categories=catset)
        violations = model.validate_sample(sample)
        if violations:
            report.skip(line_no, "; ".join(f"{v.code}: {v.message}" for v in violations))
            continue
        samples.append(sample)
        minted.add(sample_id)
        report.emitted += 1

    return samples, report


def corpus_from_samples(manifest: MappingManifest, samples: Iterable[CanonicalSample]) -> BenchmarkCorpus:
    corpus = BenchmarkCorpus()
    corpus.add_benchmark(manifest.benchmark, manifest.question_types)
    for sample in samples:
        corpus.add_sample(sample)
    return corpus


def detect_benchmark(lines: Iterable[str], manifests: "Iterable[MappingManifest] | None" = None,
                     probe: int = 5) -> BenchmarkId | None:
    """Guess which benchmark some sample lines belong to.

    A manifest matches when every probed record carries usable values for
    all its required input/choice paths. None is returned when no manifest
    or more than one matches: ambiguity is not resolved by guessing.
    """
    if manifests is None:
        manifests = shipped_manifests()
    records = []
    for raw in lines:
        if len(records) >= probe:
            break
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError:
            continue
        if isinstance(record, dict):
            records.append(record)
    if not records:
        return None

    def usable(rule: FieldRule, record: dict) -> bool:
        found, values = resolve_path(record, rule.path)
        return found and bool(values) and all(isinstance(v, str) and v for v in values)

    hits = []
    for manifest in manifests:
        required = [r for r in (*manifest.input_rules, *manifest.choice_rules) if not r.optional]
        if all(usable(rule, record) for record in records for rule in required):
            hits.append(manifest.benchmark)
    return hits[0] if len(hits) == 1 else None
