"""eNSP-style baseline: negative patterns derived from positive tid-lists.

Frequent positive patterns are mined once, with their tidsets, by a plain
PrefixSpan (no gap constraints). The support of a negative pattern is then
computed by set arithmetic: the sequences holding its positive part, minus
every sequence where some negated itemset shows up between its neighbours
(that is, where the positive part with that itemset put back occurs).
This gives strict occurrence with total non-inclusion on item sequences.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Iterator

from .model import MinedPattern, Pattern, SequenceDb
from .oracle import absolute_support


class _Indexed:
    __slots__ = ("sets", "n")

    def __init__(self, seq):
        self.sets = [frozenset()] + [frozenset(its) for its in seq.elements]
        self.n = len(seq.elements)


def _prefixspan(seqs, minsup, max_length, catalog, prefix, occs):
    """Depth-first positive mining; ``occs`` holds ``(sid, prev_end, pos)``.

    ``pos`` is the earliest position matching the last itemset after the
    earliest match ``prev_end`` of the rest of the prefix.
    """
    catalog[prefix] = tuple(sid for sid, _, _ in occs)
    n_items = sum(map(len, prefix))
    if max_length is not None and n_items >= max_length:
        return
    last = prefix[-1]
    last_set = set(last)

    # itemset composition: earliest j > prev_end with last + y ⊆ s[j]
    comp = {}
    for sid, prev_end, _ in occs:
        s = seqs[sid]
        seen = set()
        for j in range(prev_end + 1, s.n + 1):
            sj = s.sets[j]
            if last_set <= sj:
                for y in sj:
                    if y > last[-1] and y not in seen:
                        seen.add(y)
                        comp.setdefault(y, []).append((sid, prev_end, j))
    for y in sorted(comp):
        if len(comp[y]) >= minsup:
            _prefixspan(seqs, minsup, max_length, catalog, prefix[:-1] + (last + (y,),), comp[y])

    # sequence extension: earliest j > pos holding x
    ext = {}
    for sid, _, pos in occs:
        s = seqs[sid]
        seen = set()
        for j in range(pos + 1, s.n + 1):
            for x in s.sets[j]:
                if x not in seen:
                    seen.add(x)
                    ext.setdefault(x, []).append((sid, pos, j))
    for x in sorted(ext):
        if len(ext[x]) >= minsup:
            _prefixspan(seqs, minsup, max_length, catalog, prefix + ((x,),), ext[x])


def mine_positive_catalog(db: SequenceDb, partner_sigma, max_length=None) -> dict:
    """Every positive pattern with support >= ``partner_sigma``; ``{itemset tuple: tidset}``.

    Keys are tuples of itemsets. Insertion order is the depth-first order.
    """
    minsup = absolute_support(partner_sigma, len(db))
    seqs = [_Indexed(s) for s in db]
    catalog = {}
    if max_length is not None and max_length < 1:
        return catalog
    firsts = {}
    for s in db:
        idx = seqs[s.sid]
        for j in range(1, idx.n + 1):
            for x in idx.sets[j]:
                if x not in firsts.setdefault(s.sid, {}):
                    firsts[s.sid][x] = j
    by_item = {}
    for sid in sorted(firsts):
        for x, j in firsts[sid].items():
            by_item.setdefault(x, []).append((sid, 0, j))
    for x in sorted(by_item):
        if len(by_item[x]) >= minsup:
            _prefixspan(seqs, minsup, max_length, catalog, ((x,),), by_item[x])
    return catalog


def _negation_choices(m):
    """Sets of interior indices of an m-itemset pattern, no two adjacent, smallest first."""
    interior = range(1, m - 1)
    for r in range(0, (m - 1) // 2 + 1):
        for combo in combinations(interior, r):
            if all(b - a > 1 for a, b in zip(combo, combo[1:])):
                yield combo


def derive_nsps(catalog: dict, sigma: int) -> Iterator[MinedPattern]:
    """Negative patterns whose positive partner is in ``catalog`` and support >= ``sigma``.

    ``sigma`` must be an absolute count.
    """
    for partner in catalog:
        m = len(partner)
        for negated in _negation_choices(m):
            neg = set(negated)
            plus = tuple(its for i, its in enumerate(partner) if i not in neg)
            tids = catalog.get(plus)
            if tids is None or len(tids) < sigma:
                continue
            remaining = set(tids)
            for i in negated:
                with_i = tuple(its for j, its in enumerate(partner) if j not in neg or j == i)
                remaining.difference_update(catalog[with_i])
                if len(remaining) < sigma:
                    break
            if len(remaining) < sigma:
                continue
            positives, negatives = [], []
            pending = ()
            for i, its in enumerate(partner):
                if i in neg:
                    pending = its
                else:
                    if positives:
                        negatives.append(pending)
                    positives.append(its)
                    pending = ()
            pattern = Pattern.from_split(positives, negatives)
            yield MinedPattern(pattern, len(remaining), tuple(sorted(remaining)))


def partner_threshold(sigma_abs: int, partner_frac: float) -> int:
    return max(1, math.ceil(partner_frac * sigma_abs - 1e-9))


def mine(db: SequenceDb, sigma, partner_frac=1.0, max_length=None) -> Iterator[MinedPattern]:
    """Run the baseline end to end: catalog at ``partner_frac * sigma``, then derivation."""
    if len(db) == 0:
        return iter(())
    minsup = absolute_support(sigma, len(db))
    if not 0 < partner_frac <= 1:
        raise ValueError(f"partner_frac must lie in (0, 1], got {partner_frac}")
    catalog = mine_positive_catalog(db, partner_threshold(minsup, partner_frac), max_length)
    return derive_nsps(catalog, minsup)
