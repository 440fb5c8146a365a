"""Brute-force negation semantics.

A direct reading of the embedding and occurrence definitions under every
combination of itemset non-inclusion (partial/total), embedding
(soft/strict) and occurrence (soft/strict). Nothing here is optimised: the
functions enumerate every positive embedding and test it. They are the
ground truth the miners are checked against.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import product

from .model import Pattern, Sequence, SequenceDb, has_surrounding_negation, positive_part


class Inclusion(enum.Enum):
    PARTIAL = "partial"
    TOTAL = "total"


class EmbeddingMode(enum.Enum):
    SOFT = "soft"
    STRICT = "strict"


class OccurrenceMode(enum.Enum):
    SOFT = "soft"
    STRICT = "strict"


@dataclass(frozen=True)
class SemanticsConfig:
    inclusion: Inclusion = Inclusion.TOTAL
    embedding: EmbeddingMode = EmbeddingMode.SOFT
    occurrence: OccurrenceMode = OccurrenceMode.SOFT

    @classmethod
    def all(cls):
        return [cls(i, e, o) for i, e, o in product(Inclusion, EmbeddingMode, OccurrenceMode)]


NEGPSPAN_SEMANTICS = SemanticsConfig()
ENSP_SEMANTICS = SemanticsConfig(Inclusion.TOTAL, EmbeddingMode.STRICT, OccurrenceMode.STRICT)


@dataclass(frozen=True)
class GapConstraints:
    """``maxgap``/``maxspan`` bounds on the positive embedding; ``None`` is unbounded."""

    maxgap: int | None = None
    maxspan: int | None = None

    def __post_init__(self):
        for name in ("maxgap", "maxspan"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")

    def admits(self, positions) -> bool:
        if self.maxgap is not None:
            if any(b - a > self.maxgap for a, b in zip(positions, positions[1:])):
                return False
        if self.maxspan is not None and positions:
            if positions[-1] - positions[0] > self.maxspan:
                return False
        return True


NO_GAPS = GapConstraints()


def itemset_not_included(P, I, mode: Inclusion) -> bool:
    if not P:
        raise ValueError("non-inclusion is undefined for an empty itemset")
    I = set(I)
    if mode is Inclusion.PARTIAL:
        return any(e not in I for e in P)
    return all(e not in I for e in P)


def positive_embeddings(p_plus: Pattern, s: Sequence, g: GapConstraints = NO_GAPS) -> list:
    """All embeddings (1-based position tuples) of a positive pattern, lexicographically."""
    itemsets = [set(e.items) for e in p_plus.elements]
    if not itemsets or any(e.negative for e in p_plus.elements):
        raise ValueError("positive_embeddings expects a non-empty, purely positive pattern")
    n = len(s)
    out = []

    def extend(prefix, start):
        i = len(prefix)
        if i == len(itemsets):
            if g.admits(prefix):
                out.append(tuple(prefix))
            return
        for pos in range(start, n + 1):
            if itemsets[i] <= set(s[pos]):
                prefix.append(pos)
                extend(prefix, pos + 1)
                prefix.pop()

    extend([], 1)
    return out


def embedding_satisfies_negatives(p: Pattern, s: Sequence, e_plus, cfg: SemanticsConfig) -> bool:
    """Check every negated itemset of ``p`` against its window in ``s``.

    The window of a negation sitting between positives ``i`` and ``i + 1``
    is ``[e_i + 1, e_{i+1} - 1]``; an empty window is satisfied.
    """
    _, negs = p.split()
    for i, q in enumerate(negs):
        if not q:
            continue
        window = range(e_plus[i] + 1, e_plus[i + 1])
        if not window:
            continue
        if cfg.embedding is EmbeddingMode.SOFT:
            if not all(itemset_not_included(q, s[j], cfg.inclusion) for j in window):
                return False
        else:
            union = set()
            for j in window:
                union.update(s[j])
            if not itemset_not_included(q, union, cfg.inclusion):
                return False
    return True


def occurs(p: Pattern, s: Sequence, cfg: SemanticsConfig = NEGPSPAN_SEMANTICS,
           g: GapConstraints = NO_GAPS) -> bool:
    plus = positive_part(p)
    if not plus.elements:
        raise ValueError("occurrence is undefined for a pattern without positive itemsets")
    embeddings = positive_embeddings(plus, s, g)
    if not embeddings:
        return False
    verdicts = (embedding_satisfies_negatives(p, s, e, cfg) for e in embeddings)
    if cfg.occurrence is OccurrenceMode.SOFT:
        return any(verdicts)
    return all(verdicts)


def support(p: Pattern, db: SequenceDb, cfg: SemanticsConfig = NEGPSPAN_SEMANTICS,
            g: GapConstraints = NO_GAPS):
    """Return ``(count, tidset)`` where tidset is the sorted tuple of supporting sids."""
    tids = tuple(s.sid for s in db if occurs(p, s, cfg, g))
    return len(tids), tids


def absolute_support(sigma, n_sequences: int) -> int:
    """Convert a fractional threshold to a count (ceiling); integers pass through."""
    if isinstance(sigma, float):
        if not 0 < sigma <= 1:
            raise ValueError(f"fractional support must lie in (0, 1], got {sigma}")
        return max(1, math.ceil(sigma * n_sequences - 1e-9))
    if sigma < 1:
        raise ValueError(f"absolute support must be >= 1, got {sigma}")
    return int(sigma)


def _subsets_upto(items, size):
    from itertools import combinations

    for k in range(1, size + 1):
        yield from combinations(items, k)


def brute_force_mine(db: SequenceDb, sigma, *, gaps: GapConstraints = NO_GAPS, max_length=None,
                     nu=None, neg_language=None, no_surrounding=True,
                     inclusion: Inclusion = Inclusion.TOTAL) -> dict:
    """Every frequent NSP by exhaustive enumeration; ``{pattern: tidset}``.

    Soft occurrence and soft embedding are used, with ``inclusion`` for the
    negations. Candidate positive parts are grown one itemset at a time and
    only kept while they occur in at least ``sigma`` sequences (positive
    subsequence containment is monotone, so this skips nothing). Every way
    of placing negated itemsets from the language between them is then
    tested with :func:`support`.

    The negative language defaults to all itemsets of frequent items of size
    at most ``nu``; an explicit ``neg_language`` is a list of itemsets.
    """
    minsup = absolute_support(sigma, len(db))
    cfg = SemanticsConfig(inclusion, EmbeddingMode.SOFT, OccurrenceMode.SOFT)
    counts = {}
    for s in db:
        for it in {i for its in s.elements for i in its}:
            counts[it] = counts.get(it, 0) + 1
    frequent = sorted(i for i, c in counts.items() if c >= minsup)
    limit = max_length if max_length is not None else math.inf
    if neg_language is None:
        nsize = nu if nu is not None else len(frequent)
        negs = [tuple(q) for q in _subsets_upto(frequent, nsize)]
    else:
        negs = [tuple(q) for q in neg_language if nu is None or len(q) <= nu]

    # positive itemsets that occur (as subsets) in at least minsup sequences
    pos_itemsets = [q for q in _subsets_upto(frequent, len(frequent))
                    if sum(any(set(q) <= set(its) for its in s.elements) for s in db) >= minsup]

    result = {}
    frontier = [(q,) for q in pos_itemsets if len(q) <= limit]
    while frontier:
        nxt = []
        for plus in frontier:
            plus_pat = Pattern.from_split(plus, [()] * (len(plus) - 1))
            cnt, _ = support(plus_pat, db, cfg, gaps)
            if cnt < minsup:
                continue
            n_plus = sum(map(len, plus))
            choices = [[()] + [q for q in negs if n_plus + len(q) <= limit]
                       for _ in range(len(plus) - 1)]
            for combo in product(*choices):
                if n_plus + sum(map(len, combo)) > limit:
                    continue
                p = Pattern.from_split(plus, combo)
                if no_surrounding and has_surrounding_negation(p):
                    continue
                cnt, tids = support(p, db, cfg, gaps)
                if cnt >= minsup:
                    result[p] = tids
            for q in pos_itemsets:
                if n_plus + len(q) <= limit:
                    nxt.append(plus + (q,))
        frontier = nxt
    return result
