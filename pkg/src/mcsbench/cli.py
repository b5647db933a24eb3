"""Command line front end: convert, validate, query, stats, serve.

Exit codes: 0 success, 1 fatal error, 2 completed with skipped records
or validation findings.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path

from . import adapters, analytics, jsonld, model, query as q
from .model import SplitKind
from .store import TripleStore, load_corpus

ENV_CORPUS = "MCSBENCH_CORPUS"
DEFAULT_BIND = "127.0.0.1:8750"


def _corpus_arg(parser: argparse.ArgumentParser):
    parser.add_argument("--corpus", default=os.environ.get(ENV_CORPUS),
                        help=f"converted corpus directory (default: ${ENV_CORPUS})")


def _require_corpus(args) -> Path:
    if not args.corpus:
        raise SystemExit(f"error: --corpus is required (or set ${ENV_CORPUS})")
    path = Path(args.corpus)
    if not path.is_dir():
        raise SystemExit(f"error: corpus directory {path} does not exist")
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcsbench",
                                     description="Convert, inspect and query benchmark corpora.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert native benchmark files into a corpus directory")
    p.add_argument("--manifest", required=True,
                   help="mapping manifest: a path, or a shipped name such as 'socialiqa'")
    p.add_argument("--split", required=True, choices=[s.token for s in SplitKind])
    p.add_argument("--input", required=True, nargs="+", metavar="FILE",
                   help="native files in the manifest's declared order (samples [labels])")
    p.add_argument("--out", required=True, help="corpus directory to write into")
    p.add_argument("--format", default="jsonld", choices=["jsonld", "ntriples", "both"])
    p.add_argument("--force", action="store_true", help="overwrite existing split files")
    p.add_argument("--index-base", type=int, default=0, metavar="N",
                   help="offset added to line-number sample indices, for keeping "
                        "several splits of one benchmark id-disjoint in a corpus")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="re-read a corpus directory and report invalid documents")
    p.add_argument("--in", dest="corpus", default=os.environ.get(ENV_CORPUS), metavar="DIR")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="run a query against a corpus")
    _corpus_arg(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--query", metavar="FILE", help="file holding the query text")
    src.add_argument("--stdin", action="store_true", help="read the query from standard input")
    p.add_argument("--format", default="table", choices=["table", "json", "csv"])
    p.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="print corpus summaries")
    _corpus_arg(p)
    p.add_argument("--stat", choices=sorted(_STAT_BUILDERS),
                   help="one summary instead of the whole block")
    p.add_argument("--format", default="table", choices=["table", "json", "csv"])
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="serve the HTTP API over a corpus")
    _corpus_arg(p)
    p.add_argument("--bind", default=DEFAULT_BIND, metavar="HOST:PORT")
    p.add_argument("--static", metavar="DIR", help="also serve a static frontend from DIR")
    p.add_argument("--timeout", type=float, default=10.0, metavar="SECONDS",
                   help="per-query wall clock budget")
    p.set_defaults(func=cmd_serve)

    return parser


def cmd_convert(args) -> int:
    try:
        manifest = adapters.load_manifest(args.manifest)
        split = SplitKind.from_token(args.split)
        layout = manifest.splits.get(split)
        if layout is None:
            print(f"error: {manifest.benchmark.name} declares no {split.token} split", file=sys.stderr)
            return 1
        if len(args.input) != len(layout):
            print(f"error: {manifest.benchmark.name}/{split.token} expects {len(layout)} "
                  f"file(s) ({', '.join(layout)}), got {len(args.input)}", file=sys.stderr)
            return 1
        with contextlib.ExitStack() as stack:
            sources = {
                role: stack.enter_context(open(path, "r", encoding="utf-8"))
                for role, path in zip(layout, args.input)
            }
            samples, report = adapters.ingest(manifest, split, sources, index_base=args.index_base)
        corpus = adapters.corpus_from_samples(manifest, samples)
        written = jsonld.write_corpus_dir(args.out, corpus, fmt=args.format, force=args.force)
    except (adapters.ManifestError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report)
    for path in written:
        print(f"wrote {path}")
    return 2 if report.skipped else 0


def cmd_validate(args) -> int:
    if not args.corpus:
        print(f"error: --in is required (or set ${ENV_CORPUS})", file=sys.stderr)
        return 1
    root = Path(args.corpus)
    if not root.is_dir():
        print(f"error: corpus directory {root} does not exist", file=sys.stderr)
        return 1

    problems: list[str] = []
    docs = 0
    seen_ids: set[str] = set()
    split_tokens = {s.token for s in SplitKind}
    for bench_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in sorted(bench_dir.glob("*.jsonld")):
            if path.stem not in split_tokens:
                continue
            for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
                if not line.strip():
                    continue
                docs += 1
                where = f"{path.relative_to(root)}:{lineno}"
                try:
                    doc = json.loads(line)
                except json.JSONDecodeError as exc:
                    problems.append(f"{where}: invalid JSON: {exc.msg}")
                    continue
                try:
                    sample = jsonld.from_jsonld(doc)
                except jsonld.JsonLdError as exc:
                    problems.append(f"{where}: {exc}")
                    continue
                if sample.id in seen_ids:
                    problems.append(f"{where}: duplicate sample id {sample.id}")
                seen_ids.add(sample.id)
                for violation in model.validate_sample(sample):
                    problems.append(f"{where}: {violation.code}: {violation.message}")
    if not docs and not problems:
        print(f"error: {root} contains no split documents", file=sys.stderr)
        return 1
    for problem in problems:
        print(problem)
    print(f"checked {docs} documents, {len(problems)} problem(s)")
    return 2 if problems else 0


def _load_store(root: Path) -> tuple[model.BenchmarkCorpus, TripleStore]:
    corpus = jsonld.load_corpus_dir(root)
    store = TripleStore()
    load_corpus(store, corpus)
    return corpus, store


def cmd_query(args) -> int:
    root = _require_corpus(args)
    if args.stdin:
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.query).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    try:
        ast = q.parse_query(text)
    except (q.QuerySyntaxError, q.UnsupportedFeatureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        _, store = _load_store(root)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        table = q.evaluate(ast, store, timeout=args.timeout)
    except q.QueryTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(table.to_json(), indent=2, ensure_ascii=False))
    elif args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        print(table.to_text())
    return 0


_STAT_BUILDERS = {
    "construct-matrix": lambda c: analytics.construct_matrix(c),
    "splits": lambda c: analytics.split_counts(c),
    "categories": lambda c: analytics.category_distribution(c),
    "answer-positions": lambda c: analytics.answer_position_distribution(c),
    "choice-counts": lambda c: analytics.choice_count_histogram(c),
}

_STAT_TITLES = {
    "splits": "Samples per split",
    "categories": "Samples per category",
    "answer-positions": "Gold answer positions",
    "choice-counts": "Choices per sample",
}


def _render_stat(name: str, value, fmt: str) -> str:
    if name == "construct-matrix":
        if fmt == "json":
            return json.dumps(analytics.matrix_to_json(value), indent=2, ensure_ascii=False)
        if fmt == "csv":
            return analytics.matrix_to_csv(value)
        return analytics.matrix_to_text(value)
    if fmt == "json":
        return json.dumps(value.to_json(), indent=2, ensure_ascii=False)
    if fmt == "csv":
        return analytics.breakdown_to_csv(value)
    return analytics.breakdown_to_text(_STAT_TITLES[name], value)


def cmd_stats(args) -> int:
    root = _require_corpus(args)
    try:
        corpus = jsonld.load_corpus_dir(root)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    names = [args.stat] if args.stat else list(_STAT_BUILDERS)
    if args.format == "json" and not args.stat:
        blob = {}
        for name in names:
            value = _STAT_BUILDERS[name](corpus)
            blob[name] = analytics.matrix_to_json(value) if name == "construct-matrix" else value.to_json()
        print(json.dumps(blob, indent=2, ensure_ascii=False))
        return 0
    chunks = [_render_stat(name, _STAT_BUILDERS[name](corpus), args.format) for name in names]
    print("\n\n".join(chunk.rstrip("\n") for chunk in chunks))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    root = _require_corpus(args)
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --bind must look like HOST:PORT, got {args.bind!r}", file=sys.stderr)
        return 1
    try:
        corpus, store = _load_store(root)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    app = create_app(corpus, store, query_timeout=args.timeout, static_dir=args.static)
    uvicorn.run(app, host=host, port=int(port_text), log_level="info")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        raise


if __name__ == "__main__":
    sys.exit(main())
