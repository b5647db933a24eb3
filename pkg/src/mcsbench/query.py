"""A small SPARQL subset: SELECT over basic graph patterns with / paths.

Supported: PREFIX declarations (the mcs/schema/rdf/rdfs prefixes are
predeclared), SELECT with an explicit variable list and optional DISTINCT,
WHERE blocks of plain triple patterns, `a` for rdf:type, string literals
with optional language tags, and sequence property paths (p1/p2/...).
Everything else in SPARQL is rejected up front with a named error rather
than silently misevaluated.

Sequence paths are rewritten to plain patterns before evaluation. Two
paths on the same subject that share a step prefix reuse the same fresh
intermediate variable, so `?s mcs:input/schema:text ?t` and
`?s mcs:input/rdf:type ?c` describe one input node per binding rather
than a cross product of the subject's inputs.
"""

from __future__ import annotations

import math
import re
import time
from bisect import bisect_right
from dataclasses import dataclass, replace
from typing import Iterable

from .model import MCS, RDF, RDFS, RDF_TYPE, SCHEMA
from .store import Term, TripleStore, iri, literal

DEFAULT_PREFIXES = {"mcs": MCS, "schema": SCHEMA, "rdf": RDF, "rdfs": RDFS}


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class UnsupportedFeatureError(ValueError):
    def __init__(self, feature: str, line: int, col: int):
        self.feature = feature
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: unsupported feature: {feature}")


class QueryTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class PathExpr:
    steps: tuple[Term, ...]  # each an IRI, length >= 2


@dataclass(frozen=True)
class TriplePattern:
    s: "Variable | Term"
    p: "Variable | Term | PathExpr"
    o: "Variable | Term"

    def variables(self) -> Iterable[Variable]:
        for slot in (self.s, self.p, self.o):
            if isinstance(slot, Variable):
                yield slot


@dataclass(frozen=True)
class QueryAst:
    prefixes: dict
    select: tuple[Variable, ...]
    distinct: bool
    patterns: tuple[TriplePattern, ...]


# --- tokenizer ---

_UNSUPPORTED_KEYWORDS = {
    "OPTIONAL", "FILTER", "UNION", "MINUS", "GRAPH", "SERVICE", "BIND",
    "VALUES", "ORDER", "GROUP", "HAVING", "LIMIT", "OFFSET", "CONSTRUCT",
    "ASK", "DESCRIBE", "INSERT", "DELETE", "BASE", "REDUCED", "FROM",
    "EXISTS", "NOT",
}

_TOKEN_RE = re.compile(
    r"""(?P<WS>\s+)
      | (?P<COMMENT>\#[^\n]*)
      | (?P<IRIREF><[^<>"{}|^`\\\s]*>)
      | (?P<VAR>[?$][A-Za-z_][A-Za-z0-9_]*)
      | (?P<STRING>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
      | (?P<LANGTAG>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
      | (?P<BLANK>_:[A-Za-z0-9_]*)
      | (?P<PNAME>[A-Za-z_][A-Za-z0-9_\-]*:[A-Za-z0-9_\-.]*|:[A-Za-z0-9_\-.]*)
      | (?P<NUMBER>[0-9][0-9.eE+\-]*)
      | (?P<KEYWORD>[A-Za-z_][A-Za-z0-9_\-]*)
      | (?P<PUNCT>[{}./;,|^()\[\]*+?=!&<>-])
    """,
    re.VERBOSE,
)

_STRING_ESCAPES = {"n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f",
                   '"': '"', "'": "'", "\\": "\\"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    line_starts = [0]
    for i, ch in enumerate(text):
        if ch == "\n":
            line_starts.append(i + 1)

    def where(pos: int) -> tuple[int, int]:
        ln = bisect_right(line_starts, pos)
        return ln, pos - line_starts[ln - 1] + 1

    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ln, col = where(pos)
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", ln, col)
        kind = m.lastgroup
        if kind not in ("WS", "COMMENT"):
            ln, col = where(m.start())
            tokens.append(_Token(kind, m.group(), ln, col))
        pos = m.end()
    end_ln, end_col = where(len(text)) if text else (1, 1)
    tokens.append(_Token("EOF", "", end_ln, end_col))
    return tokens


def _unescape_string(raw: str, tok: _Token) -> str:
    body = raw[1:-1]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = body[i + 1]
        if nxt == "u":
            out.append(chr(int(body[i + 2:i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(body[i + 2:i + 10], 16)))
            i += 10
        elif nxt in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[nxt])
            i += 2
        else:
            raise QuerySyntaxError(f"bad string escape \\{nxt}", tok.line, tok.col)
    return "".join(out)


# --- parser ---

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.idx = 0
        self.prefixes = dict(DEFAULT_PREFIXES)

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def next(self) -> _Token:
        tok = self.tokens[self.idx]
        if tok.kind != "EOF":
            self.idx += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise QuerySyntaxError(message, tok.line, tok.col)

    def unsupported(self, feature: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise UnsupportedFeatureError(feature, tok.line, tok.col)

    def is_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.text.upper() == word

    def check_unsupported_keyword(self):
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text.upper() in _UNSUPPORTED_KEYWORDS:
            self.unsupported(tok.text.upper(), tok)
        if tok.kind == "BLANK":
            self.unsupported("blank node", tok)
        if tok.kind == "NUMBER":
            self.unsupported("numeric literal", tok)

    def parse(self) -> QueryAst:
        self.parse_prologue()
        select, distinct = self.parse_select()
        patterns = self.parse_body()
        tok = self.peek()
        if tok.kind != "EOF":
            self.check_unsupported_keyword()
            self.fail(f"unexpected {tok.text!r} after pattern block", tok)

        in_patterns = {v for pat in patterns for v in pat.variables()}
        seen = set()
        for var in select:
            if var in seen:
                self.fail(f"variable ?{var.name} projected twice")
            seen.add(var)
            if var not in in_patterns:
                self.fail(f"projected variable ?{var.name} does not occur in any pattern")
        return QueryAst(prefixes=dict(self.prefixes), select=tuple(select),
                        distinct=distinct, patterns=tuple(patterns))

    def parse_prologue(self):
        while True:
            tok = self.peek()
            if tok.kind == "KEYWORD" and tok.text.upper() == "PREFIX":
                self.next()
                name = self.next()
                if name.kind != "PNAME" or not name.text.endswith(":"):
                    self.fail("expected a prefix name ending in ':'", name)
                target = self.next()
                if target.kind != "IRIREF":
                    self.fail("expected an <IRI> after the prefix name", target)
                self.prefixes[name.text[:-1]] = target.text[1:-1]
            elif tok.kind == "KEYWORD" and tok.text.upper() == "BASE":
                self.unsupported("BASE", tok)
            else:
                return

    def parse_select(self) -> tuple[list[Variable], bool]:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text.upper() in ("CONSTRUCT", "ASK", "DESCRIBE"):
            self.unsupported(tok.text.upper(), tok)
        if not self.is_keyword("SELECT"):
            self.fail("expected SELECT", tok)
        self.next()
        distinct = False
        if self.is_keyword("DISTINCT"):
            self.next()
            distinct = True
        elif self.is_keyword("REDUCED"):
            self.unsupported("REDUCED")
        if self.peek().kind == "PUNCT" and self.peek().text == "*":
            self.unsupported("SELECT *")
        select: list[Variable] = []
        while self.peek().kind == "VAR":
            select.append(Variable(self.next().text[1:]))
        if not select:
            self.fail("SELECT needs at least one variable")
        return select, distinct

    def parse_body(self) -> list[TriplePattern]:
        if self.is_keyword("WHERE"):
            self.next()
        tok = self.next()
        if not (tok.kind == "PUNCT" and tok.text == "{"):
            self.fail("expected '{' to open the pattern block", tok)
        patterns: list[TriplePattern] = []
        while True:
            tok = self.peek()
            if tok.kind == "PUNCT" and tok.text == "}":
                self.next()
                return patterns
            if tok.kind == "EOF":
                self.fail("pattern block is not closed", tok)
            self.check_unsupported_keyword()
            if tok.kind == "PUNCT" and tok.text in ("[", "("):
                self.unsupported("blank node" if tok.text == "[" else "group pattern", tok)
            if tok.kind == "PUNCT" and tok.text == "{":
                self.unsupported("nested group pattern", tok)
            patterns.append(self.parse_pattern())
            tok = self.peek()
            if tok.kind == "PUNCT" and tok.text == ".":
                self.next()
            elif tok.kind == "PUNCT" and tok.text in (";", ","):
                self.unsupported("predicate-object list" if tok.text == ";" else "object list", tok)
            elif not (tok.kind == "PUNCT" and tok.text == "}"):
                self.fail("expected '.' or '}' after a triple pattern", tok)

    def parse_pattern(self) -> TriplePattern:
        subject = self.parse_term(position="subject")
        predicate = self.parse_path()
        obj = self.parse_term(position="object")
        return TriplePattern(subject, predicate, obj)

    def parse_path(self) -> "Variable | Term | PathExpr":
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == "^":
            self.unsupported("inverse property path", tok)
        if tok.kind == "PUNCT" and tok.text == "(":
            self.unsupported("grouped property path", tok)
        if tok.kind == "VAR":
            var = Variable(self.next().text[1:])
            if self.peek().kind == "PUNCT" and self.peek().text == "/":
                self.unsupported("variable in property path")
            return var
        steps = [self.parse_iri(position="predicate")]
        while True:
            tok = self.peek()
            if tok.kind == "PUNCT" and tok.text == "/":
                self.next()
                if self.peek().kind == "VAR":
                    self.unsupported("variable in property path")
                steps.append(self.parse_iri(position="predicate"))
            elif tok.kind == "PUNCT" and tok.text in ("|", "^", "*", "+", "?"):
                names = {"|": "alternative property path", "^": "inverse property path",
                         "*": "zero-or-more property path", "+": "one-or-more property path",
                         "?": "zero-or-one property path"}
                self.unsupported(names[tok.text], tok)
            else:
                break
        if len(steps) == 1:
            return steps[0]
        return PathExpr(steps=tuple(steps))

    def parse_term(self, position: str) -> "Variable | Term":
        self.check_unsupported_keyword()
        tok = self.peek()
        if tok.kind == "VAR":
            return Variable(self.next().text[1:])
        if tok.kind == "STRING":
            if position == "subject":
                self.fail("a literal cannot be a subject", tok)
            self.next()
            value = _unescape_string(tok.text, tok)
            lang = None
            nxt = self.peek()
            if nxt.kind == "LANGTAG":
                lang = self.next().text[1:]
            elif nxt.kind == "PUNCT" and nxt.text == "^":
                self.unsupported("typed literal", nxt)
            return literal(value, lang)
        return self.parse_iri(position=position)

    def parse_iri(self, position: str) -> Term:
        self.check_unsupported_keyword()
        tok = self.next()
        if tok.kind == "IRIREF":
            return iri(tok.text[1:-1])
        if tok.kind == "PNAME":
            prefix, _, local = tok.text.partition(":")
            if prefix not in self.prefixes:
                self.fail(f"unknown prefix '{prefix}:'", tok)
            return iri(self.prefixes[prefix] + local)
        if tok.kind == "KEYWORD" and tok.text == "a":
            if position != "predicate":
                self.fail("'a' is only valid as a predicate", tok)
            return iri(RDF_TYPE)
        self.fail(f"expected an IRI, variable or literal in {position} position, got {tok.text!r}", tok)


def parse_query(text: str) -> QueryAst:
    """Parse a query; raises QuerySyntaxError / UnsupportedFeatureError."""
    return _Parser(text).parse()


# --- path rewriting ---

def rewrite_paths(ast: QueryAst) -> QueryAst:
    """Replace sequence paths with chains of plain patterns.

    Fresh intermediate variables are memoized per (subject, step prefix):
    every path pattern hanging off the same subject walks the same chain
    of intermediate nodes as far as the steps agree. Duplicate patterns
    produced by shared prefixes are kept; they are harmless over a triple
    set and keep the expansion count predictable.
    """
    used = {v.name for pat in ast.patterns for v in pat.variables()}
    used.update(v.name for v in ast.select)
    stem = "_p"
    while any(name.startswith(stem) for name in used):
        stem += "_"

    memo: dict = {}
    counter = 0
    out: list[TriplePattern] = []
    for pat in ast.patterns:
        if not isinstance(pat.p, PathExpr):
            out.append(pat)
            continue
        steps = pat.p.steps
        cur = pat.s
        for i, step in enumerate(steps):
            if i == len(steps) - 1:
                nxt = pat.o
            else:
                key = (pat.s, steps[:i + 1])
                nxt = memo.get(key)
                if nxt is None:
                    nxt = Variable(f"{stem}{counter}")
                    counter += 1
                    memo[key] = nxt
            out.append(TriplePattern(cur, step, nxt))
            cur = nxt
    return replace(ast, patterns=tuple(out))


# --- results ---

@dataclass
class BindingTable:
    """Projected solutions: a header of variable names and term rows."""

    header: tuple[str, ...]
    rows: list[tuple[Term, ...]]

    def to_json(self) -> dict:
        bindings = []
        for row in self.rows:
            entry = {}
            for name, term in zip(self.header, row):
                if term.is_iri:
                    entry[name] = {"type": "uri", "value": term.value}
                elif term.lang:
                    entry[name] = {"type": "literal", "value": term.value, "xml:lang": term.lang}
                else:
                    entry[name] = {"type": "literal", "value": term.value}
            bindings.append(entry)
        return {"head": {"vars": list(self.header)}, "results": {"bindings": bindings}}

    def to_csv(self) -> str:
        import csv
        import io
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([t.value for t in row])
        return buf.getvalue()

    def to_text(self) -> str:
        cells = [[f"?{h}" for h in self.header]] + [[t.nt() for t in row] for row in self.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.header))]
        lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        lines.append(f"({len(self.rows)} row{'s' if len(self.rows) != 1 else ''})")
        return "\n".join(lines)


def _finalize(header: tuple[str, ...], rows: Iterable[tuple[Term, ...]], distinct: bool) -> BindingTable:
    rows = list(rows)
    if distinct:
        rows = list(dict.fromkeys(rows))
    # Terms repeat heavily across rows; compute each sort key once.
    forms: dict[Term, str] = {}

    def key(row: tuple[Term, ...]) -> list[str]:
        parts = []
        for t in row:
            form = forms.get(t)
            if form is None:
                form = forms[t] = t.nt()
            parts.append(form)
        return parts

    rows.sort(key=key)
    return BindingTable(header=header, rows=rows)


# --- evaluation ---

_CHECK_EVERY = 2048


def _compile_patterns(ast: QueryAst, store: TripleStore):
    """Map constant terms to ids; None means the term is absent entirely."""
    compiled = []
    for pat in ast.patterns:
        slots = []
        for slot in (pat.s, pat.p, pat.o):
            if isinstance(slot, Variable):
                slots.append(("var", slot.name))
            else:
                tid = store.term_id(slot)
                if tid is None:
                    return None  # a constant no triple mentions: empty result
                slots.append(("const", tid))
        compiled.append(tuple(slots))
    return compiled


def _boundness(slots, bound: set[str]) -> int:
    n = 0
    for kind, val in slots:
        if kind == "const" or val in bound:
            n += 1
    return n


def evaluate(ast: QueryAst, store: TripleStore, timeout: float | None = None) -> BindingTable:
    """Index-backed evaluation: greedy most-bound-first nested-loop join."""
    ast = rewrite_paths(ast)
    header = tuple(v.name for v in ast.select)

    compiled = _compile_patterns(ast, store)
    if compiled is None:
        return BindingTable(header=header, rows=[])

    deadline = time.monotonic() + timeout if timeout is not None else math.inf
    budget = _CHECK_EVERY

    varmap: dict[str, int] = {}
    rows: list[tuple[int, ...]] = [()]
    remaining = list(compiled)
    match = store.match
    probe = store.contains
    while remaining:
        bound = set(varmap)
        slots = max(remaining, key=lambda p: _boundness(p, bound))
        remaining.remove(slots)

        # Each slot becomes a reader: a constant, an index into the row
        # for a var already bound, or None for a capture. A variable
        # repeated among the free slots must bind to the same id
        # everywhere it occurs (same_slots pairs).
        readers: list[tuple[str, int] | None] = []
        capture_pos: list[int] = []
        capture_names: list[str] = []
        same_slots: list[tuple[int, int]] = []
        for pos, (kind, val) in enumerate(slots):
            if kind == "const":
                readers.append(("const", val))
            elif val in varmap:
                readers.append(("row", varmap[val]))
            else:
                readers.append(None)
                if val in capture_names:
                    same_slots.append((pos, capture_pos[capture_names.index(val)]))
                else:
                    capture_names.append(val)
                    capture_pos.append(pos)
        r0, r1, r2 = readers

        out: list[tuple[int, ...]] = []
        single = capture_pos[0] if len(capture_pos) == 1 and not same_slots else None
        for row in rows:
            q0 = None if r0 is None else (r0[1] if r0[0] == "const" else row[r0[1]])
            q1 = None if r1 is None else (r1[1] if r1[0] == "const" else row[r1[1]])
            q2 = None if r2 is None else (r2[1] if r2[0] == "const" else row[r2[1]])
            if not capture_names:
                # fully determined: the pattern only filters this row
                budget -= 1
                if probe((q0, q1, q2)):
                    out.append(row)
            elif single is not None:
                matched = match(q0, q1, q2)
                budget -= len(matched) + 1
                out.extend(row + (t[single],) for t in matched)
            else:
                matched = match(q0, q1, q2)
                budget -= len(matched) + 1
                for t in matched:
                    if all(t[i] == t[j] for i, j in same_slots):
                        out.append(row + tuple(t[i] for i in capture_pos))
            if budget <= 0:
                budget = _CHECK_EVERY
                if time.monotonic() > deadline:
                    raise QueryTimeout(f"query exceeded {timeout:g} s")
        for name in capture_names:
            varmap[name] = len(varmap)
        rows = out
        if not rows:
            break

    if not rows:
        return BindingTable(header=header, rows=[])
    term = store.term
    idxs = [varmap[name] for name in header]
    projected = [tuple(term(row[i]) for i in idxs) for row in rows]
    return _finalize(header, projected, ast.distinct)


def brute_force_evaluate(ast: QueryAst, store: TripleStore) -> BindingTable:
    """Oracle evaluation: full scans per pattern, naive fold join in text order.

    Shares only the path rewrite and the result shaping with evaluate;
    no indices, no join reordering, no early termination.
    """
    ast = rewrite_paths(ast)
    header = tuple(v.name for v in ast.select)
    all_triples = list(store.triples())

    per_pattern: list[list[dict[str, int]]] = []
    for pat in ast.patterns:
        slots = []
        missing = False
        for slot in (pat.s, pat.p, pat.o):
            if isinstance(slot, Variable):
                slots.append(("var", slot.name))
            else:
                tid = store.term_id(slot)
                if tid is None:
                    missing = True
                slots.append(("const", tid))
        matches: list[dict[str, int]] = []
        if not missing:
            for triple in all_triples:
                binding: dict[str, int] = {}
                ok = True
                for (kind, val), tid in zip(slots, triple):
                    if kind == "const":
                        if tid != val:
                            ok = False
                            break
                    elif binding.get(val, tid) != tid:
                        ok = False
                        break
                    else:
                        binding[val] = tid
                if ok:
                    matches.append(binding)
        per_pattern.append(matches)

    solutions: list[dict[str, int]] = [{}]
    for matches in per_pattern:
        merged = []
        for sol in solutions:
            for binding in matches:
                if all(sol.get(k, v) == v for k, v in binding.items()):
                    merged.append({**sol, **binding})
        solutions = merged

    projected = (tuple(store.term(sol[name]) for name in header) for sol in solutions)
    return _finalize(header, projected, ast.distinct)
