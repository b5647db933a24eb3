"""Dictionary-encoded in-memory triple store.

Terms are interned once into dense integer ids; triples are id tuples held
in a set (set semantics: re-inserting is a no-op) and mirrored into three
sorted permutation indices (SPO, POS, OSP) so any bound-slot shape of a
lookup is a binary-searched range scan. The store is built once, frozen,
then read concurrently; there is no deletion and no update.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class Term:
    """An IRI or a literal (optionally language-tagged)."""

    kind: str  # "iri" | "literal"
    value: str
    lang: str | None = None

    def __post_init__(self):
        if self.kind not in ("iri", "literal"):
            raise ValueError(f"term kind must be iri or literal, got {self.kind!r}")
        if self.kind == "iri" and self.lang is not None:
            raise ValueError("IRIs do not take a language tag")

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    def nt(self) -> str:
        """Canonical single-line form, also used as the sort key for results."""
        if self.kind == "iri":
            return f"<{self.value}>"
        body = _escape_literal(self.value)
        if self.lang:
            return f'"{body}"@{self.lang}'
        return f'"{body}"'


def iri(value: str) -> Term:
    return Term("iri", value)


def literal(value: str, lang: str | None = None) -> Term:
    return Term("literal", value, lang)


# str.translate beats a per-character Python loop by an order of
# magnitude, and nt() doubles as the result sort key on hot paths.
_ESCAPES = str.maketrans(
    {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"})


def _escape_literal(value: str) -> str:
    return value.translate(_ESCAPES)


def _unescape_literal(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = value[i + 1]
        if nxt == "u":
            out.append(chr(int(value[i + 2:i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(value[i + 2:i + 10], 16)))
            i += 10
        else:
            out.append({"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}[nxt])
            i += 2
    return "".join(out)


class StoreError(Exception):
    pass


_NT_LINE = re.compile(
    r'^<([^>]*)>\s+<([^>]*)>\s+(?:<([^>]*)>|"((?:[^"\\]|\\.)*)"(?:@([A-Za-z0-9\-]+))?)\s*\.$'
)


class TripleStore:
    """Append-only triple set over an interned term dictionary."""

    def __init__(self):
        self._terms: list[Term] = []
        self._ids: dict[Term, int] = {}
        self._triples: set[tuple[int, int, int]] = set()
        self._spo: list[tuple[int, int, int]] = []
        self._pos: list[tuple[int, int, int]] = []
        self._osp: list[tuple[int, int, int]] = []
        self._dirty = False
        self._frozen = False

    def __len__(self) -> int:
        return len(self._triples)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def intern(self, term: Term) -> int:
        tid = self._ids.get(term)
        if tid is None:
            if self._frozen:
                raise StoreError("store is frozen")
            tid = len(self._terms)
            self._terms.append(term)
            self._ids[term] = tid
        return tid

    def term(self, tid: int) -> Term:
        return self._terms[tid]

    def term_id(self, term: Term) -> int | None:
        """Lookup without interning; None means no triple can involve the term."""
        return self._ids.get(term)

    def add(self, s: Term, p: Term, o: Term) -> bool:
        """Insert a triple of terms; returns False when it was already present."""
        if not s.is_iri:
            raise StoreError(f"triple subject must be an IRI: {s.nt()}")
        if not p.is_iri:
            raise StoreError(f"triple predicate must be an IRI: {p.nt()}")
        return self.insert((self.intern(s), self.intern(p), self.intern(o)))

    def insert(self, triple: tuple[int, int, int]) -> bool:
        if self._frozen:
            raise StoreError("store is frozen")
        s, p, o = triple
        n = len(self._terms)
        if not (0 <= s < n and 0 <= p < n and 0 <= o < n):
            raise StoreError(f"triple {triple} references unknown term ids")
        if not self._terms[s].is_iri or not self._terms[p].is_iri:
            raise StoreError("subject and predicate must decode to IRIs")
        if triple in self._triples:
            return False
        self._triples.add(triple)
        self._spo.append(triple)
        self._pos.append((p, o, s))
        self._osp.append((o, s, p))
        self._dirty = True
        return True

    def freeze(self) -> None:
        self._sort_indices()
        self._frozen = True

    def _sort_indices(self) -> None:
        if self._dirty:
            self._spo.sort()
            self._pos.sort()
            self._osp.sort()
            self._dirty = False

    def contains(self, triple: tuple[int, int, int]) -> bool:
        return triple in self._triples

    def triples(self) -> Iterator[tuple[int, int, int]]:
        self._sort_indices()
        return iter(self._spo)

    def match(self, s: int | None = None, p: int | None = None,
              o: int | None = None) -> list[tuple[int, int, int]]:
        """Triples matching the bound slots, as a list in index order.

        The index is picked from the bound-slot shape: subject bound uses
        SPO, else predicate bound uses POS, else object bound uses OSP.
        Slots the chosen prefix cannot cover are post-filtered. A fully
        bound probe is a set lookup.
        """
        self._sort_indices()
        if s is not None:
            if p is not None and o is not None:
                return [(s, p, o)] if (s, p, o) in self._triples else []
            rows = self._scan(self._spo, (s,) if p is None else (s, p))
            if o is not None:
                return [t for t in rows if t[2] == o]
            return rows
        if p is not None:
            prefix = (p,) if o is None else (p, o)
            return [(s2, p2, o2) for p2, o2, s2 in self._scan(self._pos, prefix)]
        if o is not None:
            return [(s2, p2, o2) for o2, s2, p2 in self._scan(self._osp, (o,))]
        return list(self._spo)

    @staticmethod
    def _scan(index: list[tuple[int, int, int]], prefix: tuple[int, ...]) -> list[tuple[int, int, int]]:
        lo = bisect_left(index, prefix)
        upper = prefix[:-1] + (prefix[-1] + 1,)
        hi = bisect_left(index, upper)
        return index[lo:hi]

    def match_terms(self, s: Term | None = None, p: Term | None = None,
                    o: Term | None = None) -> Iterator[tuple[Term, Term, Term]]:
        ids = []
        for t in (s, p, o):
            if t is None:
                ids.append(None)
            else:
                tid = self._ids.get(t)
                if tid is None:
                    return  # unknown term: nothing can match
                ids.append(tid)
        for s2, p2, o2 in self.match(*ids):
            yield (self._terms[s2], self._terms[p2], self._terms[o2])

    # --- N-Triples ---

    def export_ntriples(self) -> str:
        """All triples, one per line, lexicographically sorted.

        Sorting makes the export independent of insertion order, so two
        converters producing the same triple set emit identical bytes.
        """
        lines = [
            f"{self._terms[s].nt()} {self._terms[p].nt()} {self._terms[o].nt()} ."
            for (s, p, o) in self._triples
        ]
        lines.sort()
        return "\n".join(lines) + ("\n" if lines else "")

    def load_ntriples(self, text: str) -> int:
        """Parse N-Triples lines into the store; returns triples added."""
        added = 0
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = _NT_LINE.match(line)
            if m is None:
                raise StoreError(f"line {lineno}: not a valid triple: {raw!r}")
            s_iri, p_iri, o_iri, o_lit, o_lang = m.groups()
            if o_iri is not None:
                obj = iri(o_iri)
            else:
                obj = literal(_unescape_literal(o_lit), o_lang)
            if self.add(iri(s_iri), iri(p_iri), obj):
                added += 1
        return added


@dataclass
class LoadReport:
    """Where the loaded triples came from, per benchmark and split."""

    per_dataset: dict[tuple[str, str], int]
    vocabulary: int
    total: int

    def __str__(self) -> str:
        lines = [f"{bench}/{split}: {n} triples" for (bench, split), n in sorted(self.per_dataset.items())]
        lines.append(f"vocabulary: {self.vocabulary} triples")
        lines.append(f"total: {self.total} triples")
        return "\n".join(lines)


def load_corpus(store: TripleStore, corpus) -> LoadReport:
    """Expand every sample of a corpus into the store and freeze it."""
    from . import jsonld  # deferred: jsonld imports this module for Term

    per_dataset: dict[tuple[str, str], int] = {}
    for sample in corpus.samples:
        added = 0
        for s, p, o in jsonld.expand_to_triples(sample, corpus):
            if store.add(s, p, o):
                added += 1
        key = (sample.benchmark.name, sample.split.token)
        per_dataset[key] = per_dataset.get(key, 0) + added
    vocab = 0
    for s, p, o in jsonld.vocabulary_triples(corpus):
        if store.add(s, p, o):
            vocab += 1
    store.freeze()
    return LoadReport(per_dataset=per_dataset, vocabulary=vocab, total=len(store))
