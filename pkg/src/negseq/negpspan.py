"""NegPSpan: depth-first negative sequential pattern mining.

Patterns grow PrefixSpan-style from single items through three operators:
itemset composition (add an item to the last itemset), sequence extension
(append a singleton itemset) and negative extension (insert or grow the
negated itemset between the last two positive itemsets). Every pattern
carries one projection pointer per supporting sequence. When a cheap update
of the pointer does not give a valid occurrence of the extended pattern,
the sequence is searched again from its start with :func:`match`.

Semantics: soft occurrence, soft embedding, and total (default) or partial
itemset non-inclusion for the negations.
"""
from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

from .model import Element, MinedPattern, Pattern, SequenceDb
from .oracle import Inclusion, absolute_support

log = logging.getLogger(__name__)


class ProjectionPointer(NamedTuple):
    """Occurrence cursor of a pattern in one sequence.

    ``pos`` matches the last positive itemset, ``ppred`` the previous
    positive itemset (0 when the pattern has a single itemset) and
    ``first`` the first positive itemset, which the maxspan check needs.
    """

    sid: int
    ppred: int
    pos: int
    first: int


class NegLanguage(enum.Enum):
    FREQUENT_ITEMS = "frequent"
    USER_ITEMSETS = "user"


class ConfigError(ValueError):
    pass


@dataclass
class MinerConfig:
    sigma: int | float = 1
    maxgap: int | None = None
    maxspan: int | None = None
    max_length: int | None = None
    nu: int | None = None
    neg_itemsets: list | None = None
    no_surrounding: bool = True
    inclusion: Inclusion = Inclusion.TOTAL

    @property
    def neg_language(self) -> NegLanguage:
        return NegLanguage.FREQUENT_ITEMS if self.neg_itemsets is None else NegLanguage.USER_ITEMSETS

    def check(self):
        if isinstance(self.sigma, float):
            if not 0 < self.sigma <= 1:
                raise ConfigError(f"fractional sigma must lie in (0, 1], got {self.sigma}")
        elif self.sigma < 1:
            raise ConfigError(f"sigma must be >= 1, got {self.sigma}")
        for name in ("maxgap", "maxspan", "max_length", "nu"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be >= 1, got {v}")
        if self.inclusion is Inclusion.PARTIAL and self.neg_itemsets is None:
            raise ConfigError("partial non-inclusion needs an explicit list of negative itemsets")
        if self.neg_itemsets is not None:
            for q in self.neg_itemsets:
                if not q:
                    raise ConfigError("negative itemsets must be non-empty")
        return self


class _Seq:
    """Sequence index: 1-based itemset sets, next-occurrence tables, suffix item sets."""

    __slots__ = ("sid", "n", "sets", "nxt", "after", "_pos_cache")

    def __init__(self, seq, items=None):
        self.sid = seq.sid
        self.n = n = len(seq.elements)
        self.sets = [frozenset()] + [frozenset(its) for its in seq.elements]
        present = set().union(*self.sets)
        if items is not None:
            present &= items
        # nxt[item][j]: smallest position > j holding item, 0 when none
        self.nxt = {}
        for it in present:
            table = [0] * (n + 1)
            following = 0
            for j in range(n, 0, -1):
                table[j] = following
                if it in self.sets[j]:
                    following = j
            table[0] = following
            self.nxt[it] = table
        after = [frozenset()] * (n + 1)
        acc = frozenset()
        for pos in range(n, 0, -1):
            after[pos] = acc
            acc = acc | self.sets[pos]
        after[0] = acc
        self.after = after  # after[j]: items at positions > j
        self._pos_cache = {}

    def positions(self, its):
        """Positions (ascending) whose itemset includes ``its``."""
        key = tuple(its)
        got = self._pos_cache.get(key)
        if got is None:
            s = set(key)
            got = self._pos_cache[key] = [j for j in range(1, self.n + 1) if s <= self.sets[j]]
        return got

    def next_pos(self, item, j):
        """Smallest position > j holding ``item``, or 0."""
        table = self.nxt.get(item)
        return table[j] if table is not None else 0

    def in_window(self, item, lo, hi):
        """Whether ``item`` occurs strictly between positions ``lo`` and ``hi``."""
        table = self.nxt.get(item)
        return table is not None and 0 < table[lo] < hi

    def window_items(self, lo, hi):
        return frozenset().union(*self.sets[lo + 1:hi])


def _window_ok(seq: _Seq, neg, lo, hi, inclusion) -> bool:
    if not neg or hi - lo <= 1:
        return True
    if inclusion is Inclusion.TOTAL:
        return not any(seq.in_window(it, lo, hi) for it in neg)
    neg = set(neg)
    return not any(neg <= seq.sets[j] for j in range(lo + 1, hi))


def _positions(seq: _Seq, its):
    return seq.positions(its)


def _prefix_states(seq: _Seq, positives, negatives, maxgap, maxspan, inclusion):
    """Reachable end positions of the positive prefix ``positives``.

    Returns ``{end: first}`` keeping, for each end position, the latest
    first position of a valid embedding (the most slack for maxspan).
    """
    states = {j: j for j in _positions(seq, positives[0])}
    for i in range(1, len(positives)):
        if not states:
            break
        states = _step(seq, states, positives[i], negatives[i - 1], maxgap, maxspan, inclusion)
    return states


def _step(seq, states, its, neg, maxgap, maxspan, inclusion):
    nxt = {}
    cands = _positions(seq, its)
    for prev in sorted(states):
        f = states[prev]
        hi = seq.n
        if maxgap is not None:
            hi = min(hi, prev + maxgap)
        if maxspan is not None:
            hi = min(hi, f + maxspan)
        for j in cands:
            if j <= prev:
                continue
            if j > hi:
                break
            if nxt.get(j, 0) < f and _window_ok(seq, neg, prev, j, inclusion):
                nxt[j] = f
    return nxt


def _finish(seq, states, its, neg, maxgap, maxspan, inclusion):
    """Best pointer closing ``states`` with the last itemset: min pos, then max ppred."""
    if not states:
        return None
    cands = _positions(seq, its)
    prevs = sorted(states, reverse=True)
    for j in cands:
        for prev in prevs:
            if prev >= j:
                continue
            f = states[prev]
            if maxgap is not None and j - prev > maxgap:
                break  # smaller prev only widens the gap
            if maxspan is not None and j - f > maxspan:
                continue
            if _window_ok(seq, neg, prev, j, inclusion):
                return ProjectionPointer(seq.sid, prev, j, f)
    return None


def match(seq, pattern: Pattern, maxgap=None, maxspan=None,
          inclusion: Inclusion = Inclusion.TOTAL) -> ProjectionPointer | None:
    """Earliest occurrence of ``pattern`` in ``seq``, or None.

    Earliest means smallest ``pos``; among those the largest ``ppred`` (the
    tightest window for a later negation) and then the largest ``first``.
    ``seq`` may be a :class:`~negseq.model.Sequence` or an internal index.
    """
    if not isinstance(seq, _Seq):
        seq = _Seq(seq)
    positives, negatives = pattern.split()
    if not positives:
        return None
    if len(positives) == 1:
        cands = _positions(seq, positives[0])
        return ProjectionPointer(seq.sid, 0, cands[0], cands[0]) if cands else None
    states = _prefix_states(seq, positives[:-1], negatives[:-1], maxgap, maxspan, inclusion)
    return _finish(seq, states, positives[-1], negatives[-1], maxgap, maxspan, inclusion)


def frequent_items(db: SequenceDb, sigma) -> list:
    minsup = absolute_support(sigma, len(db))
    counts = Counter()
    for s in db:
        counts.update({i for its in s.elements for i in its})
    return sorted(i for i, c in counts.items() if c >= minsup)


@dataclass
class TraceEvent:
    kind: str  # "root", "composition", "sequence", "negative"
    parent: Pattern | None
    child: Pattern
    support: int


class NegPSpan:
    """Miner state for one run; use :func:`mine` for the streaming interface."""

    def __init__(self, db: SequenceDb, cfg: MinerConfig,
                 trace: Callable[[TraceEvent], None] | None = None):
        self.cfg = cfg.check()
        self.db = db
        self.seqs = [_Seq(s) for s in db]
        self.minsup = absolute_support(cfg.sigma, len(db)) if len(db) else 1
        self.maxlen = cfg.max_length
        self.nu = cfg.nu
        self.trace = trace
        self.frequent = frequent_items(db, self.minsup) if len(db) else []
        self._frequent_set = frozenset(self.frequent)
        if cfg.inclusion is Inclusion.TOTAL:
            if cfg.neg_itemsets is None:
                self.neg_items = list(self.frequent)
            else:
                # user language under total inclusion: the items it mentions,
                # combined up to nu items per negated itemset
                self.neg_items = sorted({i for q in cfg.neg_itemsets for i in q})
            self.neg_itemsets = None
        else:
            self.neg_items = None
            self.neg_itemsets = sorted(
                {tuple(sorted(set(q))) for q in cfg.neg_itemsets
                 if self.nu is None or len(set(q)) <= self.nu}
            )
        self.stats = Counter()

    # -- driver ----------------------------------------------------------

    def roots(self):
        for item in self.frequent:
            occs = []
            for seq in self.seqs:
                pos = seq.next_pos(item, 0)
                if pos:
                    occs.append(ProjectionPointer(seq.sid, 0, pos, pos))
            yield (Element((item,)),), occs

    def run(self, items=None) -> Iterator[MinedPattern]:
        if self.maxlen is not None and self.maxlen < 1:
            return
        for elems, occs in self.roots():
            if items is not None and elems[0].items[0] not in items:
                continue
            if self.trace:
                self.trace(TraceEvent("root", None, Pattern(elems), len(occs)))
            yield from self._grow(elems, occs)

    # -- recursion -------------------------------------------------------

    def _grow(self, elems, occs) -> Iterator[MinedPattern]:
        if len(occs) < self.minsup:
            return
        self.stats["patterns"] += 1
        yield MinedPattern(Pattern(elems), len(occs), tuple(o.sid for o in occs))
        n_items = sum(len(e.items) for e in elems)
        if self.maxlen is not None and n_items >= self.maxlen:
            return
        yield from self._composition(elems, occs)
        yield from self._sequence(elems, occs)
        if len(elems) >= 2 and len(elems[-1].items) == 1:
            if self.cfg.inclusion is Inclusion.TOTAL:
                yield from self._negative_total(elems, occs)
            else:
                yield from self._negative_partial(elems, occs)

    def _child(self, kind, parent, child, occs):
        if self.trace and len(occs) >= self.minsup:
            self.trace(TraceEvent(kind, Pattern(parent), Pattern(child), len(occs)))
        return self._grow(child, occs)

    def _resolver(self, prefix):
        """Re-search closure for children sharing the positive prefix ``prefix``.

        The prefix DP states are computed once per sequence and reused for
        every candidate last itemset / last negation tried at this node.
        """
        cfg = self.cfg
        positives, negatives = Pattern(prefix).split() if prefix else ([], [])
        cache = {}

        def resolve(sid, last, neg):
            self.stats["match"] += 1
            seq = self.seqs[sid]
            if not positives:
                cands = _positions(seq, last)
                return ProjectionPointer(sid, 0, cands[0], cands[0]) if cands else None
            states = cache.get(sid)
            if states is None:
                states = cache[sid] = _prefix_states(
                    seq, positives, negatives, cfg.maxgap, cfg.maxspan, cfg.inclusion)
            return _finish(seq, states, last, neg, cfg.maxgap, cfg.maxspan, cfg.inclusion)

        return resolve

    @staticmethod
    def _prefix(elems):
        # everything before the last positive itemset and its negation
        if len(elems) >= 2 and elems[-2].negative:
            return elems[:-2], elems[-2].items
        return elems[:-1], ()

    def _composition(self, elems, occs):
        last = elems[-1].items
        top = last[-1]
        banned = set()
        if self.cfg.no_surrounding and len(elems) >= 2 and elems[-2].negative:
            banned.update(elems[-2].items)
        last_set = set(last)
        counts = Counter()
        reach = []
        for occ in occs:
            seq = self.seqs[occ.sid]
            found = set()
            for j in range(occ.pos, seq.n + 1):
                sj = seq.sets[j]
                if last_set <= sj:
                    found.update(i for i in sj if i > top)
            counts.update(found)
            reach.append(found)
        prefix, neg = self._prefix(elems)
        resolve = None
        for y in sorted(counts):
            if counts[y] < self.minsup or y in banned or y not in self._frequent_set:
                continue
            child = elems[:-1] + (Element(last + (y,)),)
            new = []
            for k, occ in enumerate(occs):
                if y not in reach[k]:
                    continue
                if y in self.seqs[occ.sid].sets[occ.pos]:
                    new.append(occ)
                else:
                    if resolve is None:
                        resolve = self._resolver(prefix)
                    m = resolve(occ.sid, last + (y,), neg)
                    if m is not None:
                        new.append(m)
            yield from self._child("composition", elems, child, new)

    def _sequence(self, elems, occs):
        counts = Counter()
        for occ in occs:
            counts.update(self.seqs[occ.sid].after[occ.pos])
        maxgap, maxspan = self.cfg.maxgap, self.cfg.maxspan
        gapped = maxgap is not None or maxspan is not None
        resolve = None
        for x in sorted(counts):
            if counts[x] < self.minsup or x not in self._frequent_set:
                continue
            child = elems + (Element((x,)),)
            new = []
            for occ in occs:
                seq = self.seqs[occ.sid]
                nxt = seq.next_pos(x, occ.pos)
                if not nxt:
                    continue
                limit = seq.n
                if maxgap is not None:
                    limit = min(limit, occ.pos + maxgap)
                if maxspan is not None:
                    limit = min(limit, occ.first + maxspan)
                if nxt <= limit:
                    new.append(ProjectionPointer(occ.sid, occ.pos, nxt, occ.first))
                elif gapped:
                    if resolve is None:
                        resolve = self._resolver(elems)
                    m = resolve(occ.sid, (x,), ())
                    if m is not None:
                        new.append(m)
            yield from self._child("sequence", elems, child, new)

    def _surrounding(self, elems):
        prev_pos = elems[-3].items if elems[-2].negative else elems[-2].items
        return set(prev_pos) | set(elems[-1].items)

    def _negative_total(self, elems, occs):
        pen = elems[-2]
        if pen.negative:
            current = pen.items
            if self.nu is not None and len(current) >= self.nu:
                return
        else:
            current = ()
        if self.maxlen is not None and sum(len(e.items) for e in elems) + 1 > self.maxlen:
            return
        banned = self._surrounding(elems) if self.cfg.no_surrounding else set()
        floor = current[-1] if current else -1
        prefix = elems[:-2] if pen.negative else elems[:-1]
        last = elems[-1].items
        resolve = None
        for it in self.neg_items:
            if it <= floor or it in banned:
                continue
            if pen.negative:
                child = elems[:-2] + (Element(current + (it,), True), elems[-1])
            else:
                child = elems[:-1] + (Element((it,), True), elems[-1])
            new = []
            remaining = len(occs)
            for occ in occs:
                remaining -= 1
                table = self.seqs[occ.sid].nxt.get(it)
                if table is None or not 0 < table[occ.ppred] < occ.pos:
                    new.append(occ)
                else:
                    if resolve is None:
                        resolve = self._resolver(prefix)
                    m = resolve(occ.sid, last, current + (it,))
                    if m is not None:
                        new.append(m)
                if len(new) + remaining < self.minsup:
                    break
            yield from self._child("negative", elems, child, new)

    def _negative_partial(self, elems, occs):
        if elems[-2].negative:
            return
        n_items = sum(len(e.items) for e in elems)
        banned = self._surrounding(elems) if self.cfg.no_surrounding else set()
        prefix, last = elems[:-1], elems[-1].items
        resolve = None
        for q in self.neg_itemsets:
            if self.maxlen is not None and n_items + len(q) > self.maxlen:
                continue
            if banned.intersection(q):
                continue
            child = elems[:-1] + (Element(q, True), elems[-1])
            qs = set(q)
            new = []
            remaining = len(occs)
            for occ in occs:
                remaining -= 1
                seq = self.seqs[occ.sid]
                if not any(qs <= seq.sets[j] for j in range(occ.ppred + 1, occ.pos)):
                    new.append(occ)
                else:
                    if resolve is None:
                        resolve = self._resolver(prefix)
                    m = resolve(occ.sid, last, q)
                    if m is not None:
                        new.append(m)
                if len(new) + remaining < self.minsup:
                    break
            yield from self._child("negative", elems, child, new)


def mine(db: SequenceDb, cfg: MinerConfig,
         trace: Callable[[TraceEvent], None] | None = None) -> Iterator[MinedPattern]:
    """Stream every frequent NSP with its support and tidset, depth first."""
    cfg.check()
    if len(db) == 0:
        return iter(())
    return NegPSpan(db, cfg, trace).run()
