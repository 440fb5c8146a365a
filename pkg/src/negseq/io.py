"""SPMF sequence files, the NSP text format and result streams.

SPMF: one sequence per line, items are non-negative integers, ``-1`` closes
an itemset and ``-2`` ends the sequence. Lines starting with ``#``, ``%`` or
``@`` are metadata; ``@ITEM=<id>=<name>`` lines name items.

Pattern lines look like ``a !(b c) (d e) #SUP: 2``.
"""
from __future__ import annotations

import re
from typing import Iterable, TextIO

from .model import (
    Element,
    InvalidPatternError,
    MinedPattern,
    Pattern,
    Sequence,
    SequenceDb,
    validate,
)


class SpmfParseError(ValueError):
    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class PatternSyntaxError(ValueError):
    pass


def _label_key(label: str):
    # integer labels sort numerically, everything else after them lexically
    return (0, int(label), "") if label.lstrip("-").isdigit() else (1, 0, label)


class SymbolTable:
    """Bijection between external item labels (strings) and dense ids."""

    def __init__(self, labels: Iterable[str] = ()):
        self._ids: dict = {}
        self._labels: list = []
        self.names: dict = {}  # optional display names from @ITEM lines
        for lab in labels:
            self.add(lab)

    @classmethod
    def from_labels(cls, labels: Iterable) -> "SymbolTable":
        return cls(str(lab) for lab in labels)

    def add(self, label) -> int:
        label = str(label)
        if label not in self._ids:
            self._ids[label] = len(self._labels)
            self._labels.append(label)
        return self._ids[label]

    def extend_sorted(self, labels: Iterable[str]):
        for lab in sorted(set(labels) - self._ids.keys(), key=_label_key):
            self.add(lab)

    def id_of(self, label) -> int:
        try:
            return self._ids[str(label)]
        except KeyError:
            raise KeyError(f"unknown item label {label!r}") from None

    def label_of(self, item: int) -> str:
        return self._labels[item]

    def __contains__(self, label):
        return str(label) in self._ids

    def __len__(self):
        return len(self._labels)

    def labels(self) -> list:
        return list(self._labels)


def _tokens(line: str):
    for m in re.finditer(r"\S+", line):
        yield m.start() + 1, m.group()


def read_spmf(stream: TextIO, symbols: SymbolTable | None = None) -> SequenceDb:
    """Parse an SPMF sequence file.

    Integer tokens are external labels; unseen labels receive dense ids in
    increasing numeric order, appended after any ids already in ``symbols``.
    Items of an itemset are sorted and de-duplicated.
    """
    if symbols is None:
        symbols = SymbolTable()
    raw_rows = []
    for lineno, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped[0] in "#%@":
            m = re.match(r"@ITEM=(-?\d+)=(.*)", stripped)
            if m:
                symbols.names[m.group(1)] = m.group(2)
            continue
        row, current, closed = [], [], False
        for col, tok in _tokens(line):
            if closed:
                raise SpmfParseError(lineno, col, "token after end of sequence (-2)")
            try:
                value = int(tok)
            except ValueError:
                raise SpmfParseError(lineno, col, f"malformed token {tok!r}") from None
            if value == -1:
                if not current:
                    raise SpmfParseError(lineno, col, "empty itemset (itemset closed twice?)")
                row.append(current)
                current = []
            elif value == -2:
                if current:
                    raise SpmfParseError(lineno, col, "itemset not closed before -2")
                if not row:
                    raise SpmfParseError(lineno, col, "empty sequence")
                closed = True
            elif value < 0:
                raise SpmfParseError(lineno, col, f"unexpected negative token {value}")
            else:
                current.append(tok if tok == str(value) else str(value))
        if not closed:
            raise SpmfParseError(lineno, len(line.rstrip("\n")) + 1, "missing -2 at end of sequence")
        raw_rows.append(row)

    symbols.extend_sorted(lab for row in raw_rows for its in row for lab in its)
    seqs = []
    for sid, row in enumerate(raw_rows):
        elems = tuple(tuple(sorted({symbols.id_of(lab) for lab in its})) for its in row)
        seqs.append(Sequence(sid, elems))
    return SequenceDb(tuple(seqs), len(symbols))


def write_spmf(db: SequenceDb, stream: TextIO, symbols: SymbolTable | None = None):
    for seq in db:
        parts = []
        for its in seq.elements:
            labels = [symbols.label_of(i) if symbols else str(i) for i in its]
            parts.append(" ".join(labels) + " -1")
        stream.write(" ".join(parts) + " -2\n")


def _label(item, symbols):
    return symbols.label_of(item) if symbols is not None else str(item)


def format_pattern(p: Pattern, symbols: SymbolTable | None = None) -> str:
    out = []
    for e in p.elements:
        labels = [_label(i, symbols) for i in e.items]
        body = labels[0] if len(labels) == 1 else "(" + " ".join(labels) + ")"
        out.append(("!" if e.negative else "") + body)
    return " ".join(out)


def write_pattern(mp: MinedPattern, symbols: SymbolTable | None = None, tidset=False) -> str:
    line = f"{format_pattern(mp.pattern, symbols)} #SUP: {mp.support}"
    if tidset and mp.tidset is not None:
        line += " #SID: " + " ".join(map(str, mp.tidset))
    return line


_PATTERN_TOKEN = re.compile(r"\s*(!?\(|\)|!?[^\s()!#]+|\S)")


def parse_pattern(text: str, symbols: SymbolTable | None = None, strict=True) -> Pattern:
    """Inverse of :func:`format_pattern`; anything from ``#`` on is ignored.

    Without a symbol table labels must be integer item ids. Raises
    :class:`PatternSyntaxError` on malformed text and
    :class:`~negseq.model.InvalidPatternError` on syntactic violations
    (unless ``strict`` is false).
    """
    body = text.split("#", 1)[0].strip()

    def lookup(tok):
        if symbols is not None:
            try:
                return symbols.id_of(tok)
            except KeyError as exc:
                raise PatternSyntaxError(str(exc)) from None
        if not tok.isdigit():
            raise PatternSyntaxError(f"item {tok!r} is not an integer id")
        return int(tok)

    elements = []
    pos = 0
    group = None  # (negative, items) while inside parentheses
    while pos < len(body):
        m = _PATTERN_TOKEN.match(body, pos)
        if not m:
            break
        tok = m.group(1)
        pos = m.end()
        if tok in ("(", "!("):
            if group is not None:
                raise PatternSyntaxError(f"nested parenthesis at offset {m.start(1)}")
            group = (tok == "!(", [])
        elif tok == ")":
            if group is None:
                raise PatternSyntaxError(f"unbalanced ')' at offset {m.start(1)}")
            neg, items = group
            if not items:
                raise PatternSyntaxError(f"empty itemset at offset {m.start(1)}")
            elements.append(Element(tuple(sorted(set(items))), neg))
            group = None
        elif tok == "!" or tok.startswith("!") and group is not None:
            raise PatternSyntaxError(f"misplaced '!' at offset {m.start(1)}")
        elif group is not None:
            group[1].append(lookup(tok))
        elif tok.startswith("!"):
            elements.append(Element((lookup(tok[1:]),), True))
        else:
            elements.append(Element((lookup(tok),)))
    if group is not None:
        raise PatternSyntaxError("unclosed '('")
    if not elements:
        raise PatternSyntaxError("empty pattern")
    p = Pattern(tuple(elements))
    if strict:
        problems = validate(p)
        if problems:
            raise InvalidPatternError(problems)
    return p


def read_patterns(stream: TextIO, symbols: SymbolTable | None = None) -> list:
    return [
        parse_pattern(line, symbols)
        for line in stream
        if line.strip() and not line.lstrip().startswith("#")
    ]


def read_itemsets(stream: TextIO, symbols: SymbolTable | None = None) -> list:
    """Read a negative-itemset language: one itemset per line, items space separated."""
    out = []
    for lineno, line in enumerate(stream, start=1):
        body = line.split("#", 1)[0].strip().strip("()")
        if not body:
            continue
        try:
            items = [symbols.id_of(t) if symbols is not None else int(t) for t in body.split()]
        except (KeyError, ValueError) as exc:
            raise PatternSyntaxError(f"line {lineno}: {exc}") from None
        out.append(tuple(sorted(set(items))))
    return out


def write_results(results: Iterable[MinedPattern], stream: TextIO, symbols=None, tidset=False) -> int:
    """Stream pattern lines, one per result; returns the number written."""
    n = 0
    for mp in results:
        stream.write(write_pattern(mp, symbols, tidset) + "\n")
        n += 1
    return n
