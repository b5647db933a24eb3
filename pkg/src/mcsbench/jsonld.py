"""Compact JSON-LD serialization and RDF expansion of canonical samples.

The compact document is the exchange format: ids relative to a base IRI,
property keys resolved through a shared @context, one document per sample.
Expansion turns the same sample into explicit triples for the store; both
views are generated from the model, never from each other.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterator

from . import model
from .model import (
    MCS, RDF_TYPE, RDFS_LABEL, SCHEMA, SCHEMA_DATASET, SCHEMA_TEXT,
    BenchmarkCorpus, BenchmarkId, CanonicalSample, ChoiceSegment,
    ConstructKind, InputSegment, SplitKind, is_absolute_iri,
)
from .store import Term, iri, literal

DEFAULT_CONTEXT_REF = "https://w3id.org/mcs/benchmark/context.jsonld"

MCS_INPUT = MCS + "input"
MCS_CHOICE = MCS + "choice"
MCS_SAMPLE = MCS + "sample"
MCS_INCLUDED = MCS + "includedInDataset"
MCS_CORRECT = MCS + "correctChoice"


class JsonLdError(ValueError):
    pass


class InvalidSampleError(ValueError):
    def __init__(self, sample_id: str, violations):
        self.violations = violations
        codes = ", ".join(v.code for v in violations)
        super().__init__(f"{sample_id} fails validation: {codes}")


def emit_context(base_iri: str = model.DEFAULT_BASE_IRI, namespace: str = MCS) -> dict:
    """The shared @context all compact documents resolve against.

    Reference-valued properties are typed @id so their string values are
    read as IRIs relative to @base, not as text.
    """
    return {
        "@context": {
            "@base": base_iri,
            "@vocab": namespace,
            "mcs": namespace,
            "schema": SCHEMA,
            "rdf": model.RDF,
            "rdfs": model.RDFS,
            "text": "schema:text",
            "input": "mcs:input",
            "choice": "mcs:choice",
            "includedInDataset": {"@id": "mcs:includedInDataset", "@type": "@id"},
            "correctChoice": {"@id": "mcs:correctChoice", "@type": "@id"},
        }
    }


def context_json(base_iri: str = model.DEFAULT_BASE_IRI, namespace: str = MCS) -> str:
    return json.dumps(emit_context(base_iri, namespace), indent=2, ensure_ascii=False) + "\n"


def _compact_iri(value: str, base_iri: str) -> str:
    if value.startswith(base_iri):
        return value[len(base_iri):]
    return value


def _category_names(categories, base: str) -> list[str]:
    # Category classes appear as extra @type entries, compacted to their
    # vocabulary-local names, sorted for byte determinism.
    names = []
    for cat in categories:
        local = cat.class_iri[len(MCS):] if cat.class_iri.startswith(MCS) else cat.class_iri
        names.append(local)
    return sorted(names)


def to_jsonld(sample: CanonicalSample, context_ref: str = DEFAULT_CONTEXT_REF,
              base_iri: str | None = None) -> dict:
    """Serialize one valid sample as a compact JSON-LD document."""
    violations = model.validate_sample(sample)
    if violations:
        raise InvalidSampleError(sample.id, violations)

    base = base_iri if base_iri is not None else sample.benchmark.base_iri
    corpus_key = f"{sample.benchmark.name}/{sample.split.token}"
    dataset_iri = sample.benchmark.base_iri + corpus_key

    doc: dict = {
        "@context": context_ref,
        "@id": _compact_iri(sample.id, base),
        "@type": "BenchmarkSample",
        "includedInDataset": _compact_iri(dataset_iri, base),
    }

    inputs = []
    for seg in sample.inputs:
        types: str | list[str] = seg.construct.class_name
        cats = _category_names(seg.categories, base)
        if cats:
            types = [seg.construct.class_name, *cats]
        inputs.append({"@id": _compact_iri(seg.id, base), "@type": types, "text": seg.text})
    doc["input"] = inputs

    if sample.choices:
        doc["choice"] = [
            {"@id": _compact_iri(c.id, base), "@type": c.construct.class_name, "text": c.text}
            for c in sample.choices
        ]
    if sample.correct_choice_id is not None:
        doc["correctChoice"] = {"@id": _compact_iri(sample.correct_choice_id, base)}
    return doc


_DATASET_IRI = re.compile(r"^(.*[/#])([^/#]+)/(train|dev|test)$")
_LAST_SEGMENT = re.compile(r"^(.*[/#])([^/#]+)$")


def _resolve(ref: str, base: str) -> str:
    return ref if is_absolute_iri(ref) else base + ref


def _node_ref(value, what: str) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, dict) and isinstance(value.get("@id"), str):
        return value["@id"]
    raise JsonLdError(f"{what} must be an IRI reference, got {value!r}")


def _type_list(node: dict, node_id: str) -> list[str]:
    types = node.get("@type")
    if types is None:
        raise JsonLdError(f"{node_id}: node lacks @type")
    if isinstance(types, str):
        return [types]
    if isinstance(types, list) and all(isinstance(t, str) for t in types):
        return types
    raise JsonLdError(f"{node_id}: @type must be a string or list of strings")


def _classify_types(types: list[str], node_id: str):
    """Split a node's @type entries into one construct plus categories."""
    construct = None
    categories = []
    for t in types:
        local = t[len(MCS):] if t.startswith(MCS) else t
        if is_absolute_iri(local):
            raise JsonLdError(f"{node_id}: unknown @type {t!r}")
        kind = model.construct_for_class(local)
        if kind is not None:
            if construct is not None:
                raise JsonLdError(f"{node_id}: conflicting constructs {construct.class_name} and {local}")
            construct = kind
        elif local.startswith("Benchmark") or not local[:1].isupper():
            raise JsonLdError(f"{node_id}: unknown @type {t!r}")
        else:
            categories.append(model.category_from_class(MCS + local if not t.startswith(MCS) else t))
    if construct is None:
        raise JsonLdError(f"{node_id}: no construct class among @type {types!r}")
    return construct, frozenset(categories)


def _segment_text(node: dict, node_id: str) -> str:
    text = node.get("text")
    if not isinstance(text, str):
        raise JsonLdError(f"{node_id}: segment lacks a text value")
    return text


def from_jsonld(doc: dict, base_iri: str | None = None) -> CanonicalSample:
    """Rebuild a canonical sample from its compact document.

    The base defaults to the one recoverable from the document's own
    absolute IRIs, else the shared default. Validation is not applied
    here; callers that need it run validate_sample on the result.
    """
    if not isinstance(doc, dict):
        raise JsonLdError("document must be a JSON object")
    doc_id = doc.get("@id")
    if not isinstance(doc_id, str) or not doc_id:
        raise JsonLdError("document lacks @id")
    sample_types = _type_list(doc, doc_id)
    if not all(t in ("BenchmarkSample", model.SAMPLE_CLASS) for t in sample_types):
        raise JsonLdError(f"{doc_id}: unknown @type {sample_types!r}, expected BenchmarkSample")

    dataset_ref = doc.get("includedInDataset")
    if dataset_ref is None:
        raise JsonLdError(f"{doc_id}: missing includedInDataset")
    dataset_ref = _node_ref(dataset_ref, "includedInDataset")

    base = base_iri
    if base is None and is_absolute_iri(doc_id):
        m = _LAST_SEGMENT.match(doc_id)
        base = m.group(1) if m else None
    if base is None and is_absolute_iri(dataset_ref):
        m = _DATASET_IRI.match(dataset_ref)
        base = m.group(1) if m else None
    if base is None:
        base = model.DEFAULT_BASE_IRI

    dataset_iri = _resolve(dataset_ref, base)
    m = _DATASET_IRI.match(dataset_iri)
    if m is None:
        raise JsonLdError(f"{doc_id}: dataset IRI {dataset_iri!r} lacks a train/dev/test suffix")
    bench = BenchmarkId(name=m.group(2), base_iri=m.group(1))
    split = SplitKind.from_token(m.group(3))
    sample_id = _resolve(doc_id, base)

    raw_inputs = doc.get("input")
    if raw_inputs is None:
        raise JsonLdError(f"{doc_id}: missing input")
    if isinstance(raw_inputs, dict):
        raw_inputs = [raw_inputs]
    if not isinstance(raw_inputs, list) or not raw_inputs:
        raise JsonLdError(f"{doc_id}: input must be a non-empty list")

    inputs = []
    for node in raw_inputs:
        node_id = _resolve(_node_ref(node.get("@id"), "input @id"), base)
        construct, categories = _classify_types(_type_list(node, node_id), node_id)
        if not construct.is_input:
            raise JsonLdError(f"{node_id}: {construct.class_name} is not an input construct")
        inputs.append(InputSegment(id=node_id, construct=construct,
                                   text=_segment_text(node, node_id), categories=categories))

    choices = []
    raw_choices = doc.get("choice", [])
    if isinstance(raw_choices, dict):
        raw_choices = [raw_choices]
    if not isinstance(raw_choices, list):
        raise JsonLdError(f"{doc_id}: choice must be a list")
    for ordinal, node in enumerate(raw_choices, start=1):
        node_id = _resolve(_node_ref(node.get("@id"), "choice @id"), base)
        construct, categories = _classify_types(_type_list(node, node_id), node_id)
        if categories:
            raise JsonLdError(f"{node_id}: choices do not carry category types")
        if not construct.is_choice:
            raise JsonLdError(f"{node_id}: {construct.class_name} is not a choice construct")
        choices.append(ChoiceSegment(id=node_id, construct=construct,
                                     text=_segment_text(node, node_id), ordinal=ordinal))

    correct = None
    if "correctChoice" in doc:
        correct = _resolve(_node_ref(doc["correctChoice"], "correctChoice"), base)
        if correct not in {c.id for c in choices}:
            raise JsonLdError(f"{doc_id}: correctChoice {correct} is not among the choices")

    sample_categories = frozenset().union(*(i.categories for i in inputs)) if inputs else frozenset()
    return CanonicalSample(
        id=sample_id, benchmark=bench, split=split,
        inputs=tuple(inputs), choices=tuple(choices),
        correct_choice_id=correct, categories=sample_categories,
    )


def expand_to_triples(sample: CanonicalSample, corpus: BenchmarkCorpus) -> list[tuple[Term, Term, Term]]:
    """All triples a sample contributes to the RDF view.

    Includes the dataset scaffolding (dataset typing, task link) and the
    materialized inverse dataset->sample edge, so a corpus expansion is
    just the union over samples plus the class vocabulary.
    """
    if not corpus.has_sample(sample.id):
        raise ValueError(f"sample {sample.id} is not registered in the corpus")
    dataset = corpus.dataset_iri(sample.benchmark.name, sample.split)
    task = corpus.task_iri(sample.benchmark.name)
    s = iri(sample.id)
    d = iri(dataset)
    rdf_type = iri(RDF_TYPE)
    text_p = iri(SCHEMA_TEXT)

    out: list[tuple[Term, Term, Term]] = [
        (s, rdf_type, iri(model.SAMPLE_CLASS)),
        (s, iri(MCS_INCLUDED), d),
        (d, iri(MCS_SAMPLE), s),
        (d, rdf_type, iri(sample.split.dataset_class)),
        (iri(task), iri(SCHEMA_DATASET), d),
    ]
    for seg in sample.inputs:
        node = iri(seg.id)
        out.append((s, iri(MCS_INPUT), node))
        out.append((node, rdf_type, iri(seg.construct.class_iri())))
        for cat in sorted(seg.categories, key=lambda c: c.class_iri):
            out.append((node, rdf_type, iri(cat.class_iri)))
        out.append((node, text_p, literal(seg.text)))
    for seg in sample.choices:
        node = iri(seg.id)
        out.append((s, iri(MCS_CHOICE), node))
        out.append((node, rdf_type, iri(seg.construct.class_iri())))
        out.append((node, text_p, literal(seg.text)))
    if sample.correct_choice_id is not None:
        out.append((s, iri(MCS_CORRECT), iri(sample.correct_choice_id)))
    return out


def vocabulary_triples(corpus: BenchmarkCorpus) -> list[tuple[Term, Term, Term]]:
    """rdfs:label triples for every ontology class the corpus touches.

    Construct, sample, and dataset classes get their local name as label;
    category classes keep the original category wording.
    """
    labels: dict[str, str] = {model.SAMPLE_CLASS: "BenchmarkSample"}
    for (_, split) in corpus.datasets:
        labels[split.dataset_class] = split.dataset_class[len(MCS):]
    for sample in corpus.samples:
        for seg in (*sample.inputs, *sample.choices):
            labels[seg.construct.class_iri()] = seg.construct.class_name
        for cat in sample.categories:
            labels[cat.class_iri] = cat.label
    label_p = iri(RDFS_LABEL)
    return [(iri(cls), label_p, literal(text)) for cls, text in sorted(labels.items())]


# --- corpus directories ---
# Layout: <dir>/context.jsonld, <dir>/corpus.json, <dir>/<benchmark>/<split>.jsonld
# (JSON Lines: one compact document per line), optional <split>.nt exports.

_SPLIT_ORDER = [SplitKind.TRAIN, SplitKind.DEV, SplitKind.TEST]


def write_corpus_dir(out_dir: str | Path, corpus: BenchmarkCorpus, *,
                     fmt: str = "jsonld", force: bool = False,
                     context_ref: str | None = None) -> list[Path]:
    """Write a corpus as one split file per benchmark; returns written paths."""
    if fmt not in ("jsonld", "ntriples", "both"):
        raise ValueError(f"format must be jsonld, ntriples or both, got {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    names = sorted(corpus.benchmarks)
    context_base = corpus.benchmarks[names[0]].base_iri if names else model.DEFAULT_BASE_IRI
    ref = context_ref if context_ref is not None else DEFAULT_CONTEXT_REF

    written: list[Path] = []
    context_path = out / "context.jsonld"
    context_path.write_text(context_json(context_base), encoding="utf-8")
    written.append(context_path)

    sidecar = out / "corpus.json"
    meta = {"benchmarks": {}}
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
        meta.setdefault("benchmarks", {})
    for name in names:
        bench = corpus.benchmarks[name]
        meta["benchmarks"][name] = {
            "baseIri": bench.base_iri,
            "questionTypes": sorted(corpus.question_types.get(name, frozenset())),
        }
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(sidecar)

    groups: dict[tuple[str, SplitKind], list[CanonicalSample]] = {}
    for sample in corpus.samples:
        groups.setdefault((sample.benchmark.name, sample.split), []).append(sample)

    for (name, split), samples in sorted(groups.items(), key=lambda kv: (kv[0][0], _SPLIT_ORDER.index(kv[0][1]))):
        bench_dir = out / name
        bench_dir.mkdir(exist_ok=True)
        if fmt in ("jsonld", "both"):
            path = bench_dir / f"{split.token}.jsonld"
            if path.exists() and not force:
                raise FileExistsError(f"{path} exists; pass force to overwrite")
            lines = [json.dumps(to_jsonld(s, context_ref=ref), ensure_ascii=False) for s in samples]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(path)
        if fmt in ("ntriples", "both"):
            from .store import TripleStore, load_corpus
            path = bench_dir / f"{split.token}.nt"
            if path.exists() and not force:
                raise FileExistsError(f"{path} exists; pass force to overwrite")
            part = BenchmarkCorpus()
            part.add_benchmark(corpus.benchmarks[name], corpus.question_types.get(name, frozenset()))
            for s in samples:
                part.add_sample(s)
            sub = TripleStore()
            load_corpus(sub, part)
            path.write_text(sub.export_ntriples(), encoding="utf-8")
            written.append(path)
    return written


def load_corpus_dir(corpus_dir: str | Path) -> BenchmarkCorpus:
    """Read a converted corpus directory back into the model."""
    root = Path(corpus_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory {root} does not exist")

    default_base = model.DEFAULT_BASE_IRI
    context_path = root / "context.jsonld"
    if context_path.exists():
        ctx = json.loads(context_path.read_text(encoding="utf-8")).get("@context", {})
        if isinstance(ctx, dict) and isinstance(ctx.get("@base"), str):
            default_base = ctx["@base"]

    meta: dict = {}
    sidecar = root / "corpus.json"
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding="utf-8")).get("benchmarks", {})

    corpus = BenchmarkCorpus()
    for name, entry in sorted(meta.items()):
        corpus.add_benchmark(BenchmarkId(name, entry.get("baseIri", default_base)),
                             frozenset(entry.get("questionTypes", [])))

    split_files: list[tuple[str, SplitKind, Path]] = []
    for bench_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in bench_dir.glob("*.jsonld"):
            try:
                split = SplitKind.from_token(path.stem)
            except ValueError:
                continue
            split_files.append((bench_dir.name, split, path))
    if not split_files and not meta:
        raise FileNotFoundError(f"{root} contains no <benchmark>/<split>.jsonld files")

    split_files.sort(key=lambda t: (t[0], _SPLIT_ORDER.index(t[1])))
    for name, _, path in split_files:
        base = meta.get(name, {}).get("baseIri", default_base)
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                corpus.add_sample(from_jsonld(json.loads(line), base_iri=base))
            except (ValueError, KeyError) as exc:
                raise JsonLdError(f"{path}:{lineno}: {exc}") from exc
    return corpus


def sample_scoped_triples(sample: CanonicalSample, corpus: BenchmarkCorpus) -> list[tuple[Term, Term, Term]]:
    """expand_to_triples without the per-dataset scaffolding.

    Drops the dataset typing and task link (shared by every sample of the
    split) but keeps the materialized inverse dataset->sample edge, which
    is particular to the sample.
    """
    dataset = corpus.dataset_iri(sample.benchmark.name, sample.split)
    task = corpus.task_iri(sample.benchmark.name)
    skip = {
        (dataset, RDF_TYPE, sample.split.dataset_class),
        (task, SCHEMA_DATASET, dataset),
    }
    return [t for t in expand_to_triples(sample, corpus)
            if (t[0].value, t[1].value, t[2].value) not in skip]
