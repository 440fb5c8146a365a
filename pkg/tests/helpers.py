"""Shared builders and hypothesis strategies for the test suite."""
import re

from hypothesis import strategies as st

from negseq.io import SymbolTable, parse_pattern
from negseq.model import Element, Pattern, Sequence, SequenceDb

LETTERS = SymbolTable.from_labels("abcdefg")


def seq(text, sid=0):
    """``"a (bc) e"`` -> Sequence with a=0, b=1, ..."""
    elems = []
    for tok in re.findall(r"\([a-z]+\)|[a-z]", text):
        elems.append(tuple(sorted(LETTERS.id_of(c) for c in tok.strip("()"))))
    return Sequence(sid, tuple(elems))


def db(*rows, alphabet="abcdefg"):
    return SequenceDb(tuple(seq(r, i) for i, r in enumerate(rows)), len(alphabet))


def pat(text):
    return parse_pattern(text, LETTERS)


def itemsets(d, max_size=2):
    return st.lists(st.integers(0, d - 1), min_size=1, max_size=max_size, unique=True).map(
        lambda xs: tuple(sorted(xs)))


@st.composite
def sequences(draw, d=4, max_len=8, max_size=2, sid=0):
    elems = draw(st.lists(itemsets(d, max_size), min_size=1, max_size=max_len))
    return Sequence(sid, tuple(elems))


@st.composite
def databases(draw, d=4, max_seqs=6, max_len=8, max_size=2):
    n = draw(st.integers(1, max_seqs))
    rows = [draw(sequences(d, max_len, max_size, sid=i)) for i in range(n)]
    return SequenceDb(tuple(rows), d)


@st.composite
def patterns(draw, d=4, max_pos=4, max_size=2, neg_size=2):
    """Valid patterns: positives with optional negations between them."""
    k = draw(st.integers(1, max_pos))
    positives = [draw(itemsets(d, max_size)) for _ in range(k)]
    negatives = [draw(st.one_of(st.just(()), itemsets(d, neg_size))) for _ in range(k - 1)]
    return Pattern.from_split(positives, negatives)


@st.composite
def raw_patterns(draw, d=4):
    """Arbitrary element lists, valid or not."""
    elems = draw(st.lists(st.tuples(st.lists(st.integers(0, d - 1), max_size=3), st.booleans()),
                          max_size=5))
    return Pattern(tuple(Element(tuple(items), neg) for items, neg in elems))
