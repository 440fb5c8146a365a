"""Synthetic item-sequence databases with planted negative patterns.

Each hidden pattern alternates single positive items with single negated
items (at least one negation). It is planted into a fixed share of the
sequences by writing its positive items at increasing positions (at most
three positions apart) and rewriting any negated item found in the gaps.
Everything else is uniform random. Sequence lengths are Poisson
distributed around the requested mean (minimum 1).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .model import Pattern, Sequence, SequenceDb
from .oracle import NEGPSPAN_SEMANTICS, occurs

MAX_STEP = 3


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    n: int = 500
    l: int = 20  # noqa: E741 - mean sequence length
    d: int = 20
    n_patterns: int = 3
    pattern_len: int = 4
    min_occ_freq: float = 0.10
    seed: int = 0

    def check(self):
        for name in ("n", "l", "d", "pattern_len"):
            if getattr(self, name) < 1:
                raise GenerationError(f"{name} must be positive")
        if self.n_patterns < 0:
            raise GenerationError("n_patterns must be >= 0")
        if not 0 < self.min_occ_freq <= 1:
            raise GenerationError("min_occ_freq must lie in (0, 1]")
        if self.n_patterns and self.d < 2:
            raise GenerationError("hidden negative patterns need at least two items")
        if self.n_patterns and self.pattern_len > self.l:
            raise GenerationError("hidden patterns longer than the mean sequence length")
        return self


def _random_pattern(rng: random.Random, nprng, params: GenParams) -> Pattern:
    # total item count: Poisson around the mean, at least <a ¬b c>
    length = max(3, int(nprng.poisson(params.pattern_len)))
    n_pos = max(2, length - rng.randint(1, (length - 1) // 2))
    n_neg = length - n_pos
    if n_pos > 2 * params.l:
        raise GenerationError(f"hidden pattern with {n_pos} positives cannot fit sequences of mean length {params.l}")
    positives = [(rng.randrange(params.d),) for _ in range(n_pos)]
    slots = sorted(rng.sample(range(n_pos - 1), n_neg))
    negatives = [()] * (n_pos - 1)
    for k in slots:
        around = {positives[k][0], positives[k + 1][0]}
        choices = [i for i in range(params.d) if i not in around]
        if not choices:
            continue
        negatives[k] = (rng.choice(choices),)
    if not any(negatives):
        k = rng.randrange(n_pos - 1)
        around = {positives[k][0], positives[k + 1][0]}
        choices = [i for i in range(params.d) if i not in around]
        if not choices:
            raise GenerationError("alphabet too small for a negated item")
        negatives[k] = (rng.choice(choices),)
    return Pattern.from_split(positives, negatives)


def _plant(rng: random.Random, row: list, pattern: Pattern, d: int):
    positives, negatives = pattern.split()
    k = len(positives)
    steps = [rng.randint(1, MAX_STEP) for _ in range(k - 1)]
    span = sum(steps) + 1
    if span > len(row):
        row.extend(rng.randrange(d) for _ in range(span - len(row)))
    start = rng.randrange(len(row) - span + 1)
    pos = start
    for i, its in enumerate(positives):
        row[pos] = its[0]
        if i < k - 1:
            neg = set(negatives[i])
            for j in range(pos + 1, pos + steps[i]):
                while row[j] in neg:
                    row[j] = rng.randrange(d)
            pos += steps[i]


def generate(params: GenParams):
    """Return ``(db, hidden_patterns)``; deterministic for a given ``params.seed``."""
    params.check()
    rng = random.Random(params.seed)
    nprng = np.random.default_rng(params.seed)
    lengths = [max(1, int(x)) for x in nprng.poisson(params.l, size=params.n)]
    rows = [[rng.randrange(params.d) for _ in range(m)] for m in lengths]
    hidden = [_random_pattern(rng, nprng, params) for _ in range(params.n_patterns)]
    quota = math.ceil(params.min_occ_freq * params.n - 1e-9)
    used = set()
    for h in hidden:
        free = [i for i in range(params.n) if i not in used]
        pool = free if len(free) >= quota else list(range(params.n))
        targets = rng.sample(pool, quota)
        for sid in targets:
            _plant(rng, rows[sid], h, params.d)
        used.update(targets)

    db = SequenceDb(tuple(Sequence(i, tuple((x,) for x in row)) for i, row in enumerate(rows)), params.d)
    # later plantings may break earlier ones when sequences are shared; top up
    for attempt in range(20):
        short = []
        for h in hidden:
            got = sum(occurs(h, s, NEGPSPAN_SEMANTICS) for s in db)
            if got < quota:
                short.append((h, quota - got))
        if not short:
            break
        for h, missing in short:
            lacking = [s.sid for s in db if not occurs(h, s, NEGPSPAN_SEMANTICS)]
            for sid in rng.sample(lacking, min(missing, len(lacking))):
                _plant(rng, rows[sid], h, params.d)
        db = SequenceDb(tuple(Sequence(i, tuple((x,) for x in row)) for i, row in enumerate(rows)), params.d)
    else:
        raise GenerationError("could not plant every hidden pattern at the requested frequency")
    return db, hidden
