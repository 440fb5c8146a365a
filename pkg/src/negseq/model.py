"""Integer-encoded domain types: itemsets, sequences, databases and negative patterns.

Items are dense non-negative integers. Their natural order is the total
order used for candidate generation. Itemsets are sorted tuples of items.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence as Seq

Item = int
Itemset = tuple  # tuple[int, ...], strictly increasing


def itemset(items: Iterable[int]) -> tuple:
    """Normalise an iterable of items into a sorted, duplicate-free tuple."""
    return tuple(sorted(set(items)))


@dataclass(frozen=True)
class Sequence:
    sid: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, pos):
        # 1-based positions, matching embedding coordinates
        return self.elements[pos - 1]


@dataclass(frozen=True)
class SequenceDb:
    sequences: tuple
    alphabet_size: int

    def __post_init__(self):
        for i, seq in enumerate(self.sequences):
            if seq.sid != i:
                raise ValueError(f"sequence ids must be dense: expected {i}, got {seq.sid}")
            if not seq.elements:
                raise ValueError(f"sequence {i} is empty")
            for its in seq.elements:
                if not its:
                    raise ValueError(f"sequence {i} holds an empty itemset")
                if list(its) != sorted(set(its)):
                    raise ValueError(f"sequence {i} holds an unsorted itemset {its}")
                if its[-1] >= self.alphabet_size or its[0] < 0:
                    raise ValueError(f"sequence {i}: item out of alphabet range")

    @classmethod
    def from_lists(cls, rows, alphabet_size=None):
        """Build a database from nested lists ``[[itemset, ...], ...]``."""
        seqs = tuple(
            Sequence(sid, tuple(itemset(its) for its in row)) for sid, row in enumerate(rows)
        )
        if alphabet_size is None:
            alphabet_size = 1 + max((its[-1] for s in seqs for its in s.elements), default=-1)
        return cls(seqs, alphabet_size)

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    def __getitem__(self, sid):
        return self.sequences[sid]

    def is_item_sequence_db(self) -> bool:
        return all(len(its) == 1 for s in self.sequences for its in s.elements)


class Element(NamedTuple):
    """One pattern element: a positive or a negated itemset."""

    items: tuple
    negative: bool = False


@dataclass(frozen=True)
class Violation:
    kind: str
    index: int

    def __str__(self):
        return f"{self.kind} at element {self.index}"


BOUNDARY_NEGATIVE = "boundary negative"
CONSECUTIVE_NEGATIVES = "consecutive negatives"
EMPTY_ITEMSET = "empty itemset"
UNSORTED_ITEMSET = "unsorted or duplicated items"


@dataclass(frozen=True)
class Pattern:
    """A negative sequential pattern: positive and negated itemsets in a row.

    Construction does not validate; call :func:`validate` (or use
    :meth:`checked`) when the input is untrusted.
    """

    elements: tuple = ()

    @classmethod
    def of(cls, *elements) -> "Pattern":
        """Shorthand constructor; negated itemsets are written ``("!", items)``.

        >>> Pattern.of((0,), ("!", (2,)), (4,))
        Pattern(elements=(Element(items=(0,), negative=False), Element(items=(2,), negative=True), Element(items=(4,), negative=False)))
        """
        out = []
        for e in elements:
            if isinstance(e, Element):
                out.append(e)
            elif e and e[0] == "!":
                out.append(Element(tuple(e[1]), True))
            else:
                out.append(Element(tuple(e)))
        return cls(tuple(out))

    def checked(self) -> "Pattern":
        problems = validate(self)
        if problems:
            raise InvalidPatternError(problems)
        return self

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def n_items(self) -> int:
        return sum(len(e.items) for e in self.elements)

    @property
    def has_negatives(self) -> bool:
        return any(e.negative for e in self.elements)

    def positives(self) -> list:
        return [e.items for e in self.elements if not e.negative]

    def split(self):
        """Return ``(positives, negatives)`` with ``len(negatives) == len(positives) - 1``.

        ``negatives[i]`` is the itemset negated between positive ``i`` and
        ``i + 1``; it is the empty tuple when there is none.
        """
        pos, neg = [], []
        pending = ()
        for e in self.elements:
            if e.negative:
                pending = e.items
            else:
                if pos:
                    neg.append(pending)
                pos.append(e.items)
                pending = ()
        return pos, neg

    @classmethod
    def from_split(cls, positives, negatives) -> "Pattern":
        elems = []
        for i, p in enumerate(positives):
            if i and negatives[i - 1]:
                elems.append(Element(tuple(negatives[i - 1]), True))
            elems.append(Element(tuple(p)))
        return cls(tuple(elems))


class InvalidPatternError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid pattern: " + "; ".join(map(str, self.violations)))


@dataclass
class MinedPattern:
    pattern: Pattern
    support: int
    tidset: tuple | None = field(default=None)

    def __post_init__(self):
        if self.tidset is not None and len(self.tidset) != self.support:
            raise ValueError("tidset size does not match support")


def positive_part(p: Pattern) -> Pattern:
    return Pattern(tuple(e for e in p.elements if not e.negative))


def validate(p: Pattern) -> list:
    """List every syntactic violation of ``p``; an empty list means valid.

    The empty pattern is valid (it is the search root).
    """
    out = []
    elems = p.elements
    for i, e in enumerate(elems):
        if not e.items:
            out.append(Violation(EMPTY_ITEMSET, i))
        elif any(a >= b for a, b in zip(e.items, e.items[1:])):
            out.append(Violation(UNSORTED_ITEMSET, i))
        if e.negative:
            if i == 0 or i == len(elems) - 1:
                out.append(Violation(BOUNDARY_NEGATIVE, i))
            if i > 0 and elems[i - 1].negative:
                out.append(Violation(CONSECUTIVE_NEGATIVES, i))
    return out


def _subset(a: Seq, b: Seq) -> bool:
    return set(a) <= set(b)


def partial_order_leq(p: Pattern, q: Pattern) -> bool:
    """Test ``p ⊲ q`` on the prefix-aligned positive/negative itemsets.

    Clause by clause: ``k <= k'``; for every ``i < k`` both ``p_i ⊆ q_i``
    and ``neg_i ⊆ neg'_i``; ``p_k ⊆ q_k``; and when ``k != k'`` the last
    positive itemsets of ``p`` and ``q`` at index ``k`` must differ.
    """
    pp, pn = p.split()
    qp, qn = q.split()
    k, k2 = len(pp), len(qp)
    if k == 0 or k > k2:
        return False
    for i in range(k - 1):
        if not (_subset(pp[i], qp[i]) and _subset(pn[i], qn[i])):
            return False
    if not _subset(pp[k - 1], qp[k - 1]):
        return False
    if k2 != k and set(pp[k - 1]) == set(qp[k - 1]):
        return False
    return True


def has_surrounding_negation(p: Pattern) -> bool:
    """True when some negated item also appears in an adjacent positive itemset."""
    elems = p.elements
    for i, e in enumerate(elems):
        if e.negative:
            around = set()
            if i > 0:
                around.update(elems[i - 1].items)
            if i + 1 < len(elems):
                around.update(elems[i + 1].items)
            if around.intersection(e.items):
                return True
    return False
