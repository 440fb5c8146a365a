from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import databases, itemsets, pat, patterns, seq, sequences
from negseq.model import Pattern, positive_part
from negseq.oracle import (
    NEGPSPAN_SEMANTICS,
    NO_GAPS,
    EmbeddingMode,
    GapConstraints,
    Inclusion,
    OccurrenceMode,
    SemanticsConfig,
    absolute_support,
    embedding_satisfies_negatives,
    itemset_not_included,
    occurs,
    positive_embeddings,
    support,
)

TOTAL = Inclusion.TOTAL
PARTIAL = Inclusion.PARTIAL


def cfg(inclusion=TOTAL, embedding=EmbeddingMode.SOFT, occurrence=OccurrenceMode.SOFT):
    return SemanticsConfig(inclusion, embedding, occurrence)


class TestNonInclusion:
    def test_total_fails_on_shared_item(self):
        assert not itemset_not_included((2, 3), (2, 5), TOTAL)

    def test_partial_holds_on_missing_item(self):
        assert itemset_not_included((2, 3), (2, 5), PARTIAL)

    @pytest.mark.parametrize("mode", list(Inclusion))
    def test_single_item_identity(self, mode):
        assert not itemset_not_included((2,), (2,), mode)

    def test_empty_itemset_rejected(self):
        with pytest.raises(ValueError):
            itemset_not_included((), (1,), TOTAL)

    @given(itemsets(5, 3), itemsets(5, 3))
    def test_total_implies_partial(self, P, I):
        if itemset_not_included(P, I, TOTAL):
            assert itemset_not_included(P, I, PARTIAL)


class TestEmbeddings:
    s2 = seq("a b c a d e b d")

    def test_all_embeddings(self):
        # exhaustive listing: a at 1/4, b at 2/7, d at 5/8
        assert positive_embeddings(pat("a b d"), self.s2) == [(1, 2, 5), (1, 2, 8), (1, 7, 8), (4, 7, 8)]

    def test_single(self):
        assert positive_embeddings(pat("a"), seq("a")) == [(1,)]

    def test_maxgap_two_removes_all(self):
        assert positive_embeddings(pat("a b d"), self.s2, GapConstraints(maxgap=2)) == []

    def test_maxgap_three(self):
        assert positive_embeddings(pat("a b d"), self.s2, GapConstraints(maxgap=3)) == [(1, 2, 5), (4, 7, 8)]

    def test_maxspan(self):
        assert positive_embeddings(pat("a b d"), self.s2, GapConstraints(maxspan=4)) == [(1, 2, 5), (4, 7, 8)]

    def test_itemset_containment(self):
        assert positive_embeddings(pat("(b c) a"), seq("(bc) (cf) a")) == [(1, 3)]

    def test_rejects_negative_pattern(self):
        with pytest.raises(ValueError):
            positive_embeddings(pat("a !b c"), self.s2)

    @given(patterns(d=4, max_pos=3), sequences())
    def test_embeddings_valid(self, p, s):
        plus = positive_part(p)
        for e in positive_embeddings(plus, s):
            assert list(e) == sorted(set(e))
            assert all(set(its) <= set(s[j]) for its, j in zip(plus.positives(), e))

    def test_bad_gaps(self):
        with pytest.raises(ValueError):
            GapConstraints(maxgap=0)


class TestAbsenceExample:
    """⟨a ¬(bc) d⟩ on four sequences, each holding ⟨a d⟩ once."""

    p = pat("a !(b c) d")

    def verdicts(self, absence_db, c):
        return [occurs(self.p, s, c) for s in absence_db]

    def test_total(self, absence_db):
        # b or c sits between a and d in s1, s2, s3
        for emb in EmbeddingMode:
            assert self.verdicts(absence_db, cfg(TOTAL, emb)) == [False, False, False, True]

    def test_partial_strict(self, absence_db):
        assert self.verdicts(absence_db, cfg(PARTIAL, EmbeddingMode.STRICT)) == [False, False, True, True]

    def test_partial_soft(self, absence_db):
        # s1 has c and b in separate itemsets, neither holds both
        assert self.verdicts(absence_db, cfg(PARTIAL, EmbeddingMode.SOFT)) == [True, False, True, True]

    def test_embedding_level(self, absence_db):
        s1, _, s3, s4 = absence_db
        e = (1, 5)
        assert not embedding_satisfies_negatives(self.p, s1, e, cfg(TOTAL))
        assert not embedding_satisfies_negatives(self.p, s1, e, cfg(PARTIAL, EmbeddingMode.STRICT))
        assert embedding_satisfies_negatives(self.p, s3, (1, 4), cfg(PARTIAL, EmbeddingMode.STRICT))
        assert embedding_satisfies_negatives(self.p, s4, (1, 3), cfg(PARTIAL, EmbeddingMode.SOFT))

    def test_empty_window(self):
        assert embedding_satisfies_negatives(pat("a !b c"), seq("a c"), (1, 2), cfg())


class TestOccurrence:
    p = pat("a b !c d")

    def test_soft_vs_strict(self):
        s2 = seq("a b c a d e b d")
        assert occurs(self.p, s2, cfg())
        assert not occurs(self.p, s2, cfg(occurrence=OccurrenceMode.STRICT))

    def test_single_embedding(self):
        s1 = seq("a b e d")
        for c in SemanticsConfig.all():
            assert occurs(self.p, s1, c)

    def test_absent_positive_part(self):
        for c in SemanticsConfig.all():
            assert not occurs(pat("a"), seq("b"), c)

    def test_gaps_restrict_occurrence(self):
        s = seq("a c b e d")
        assert occurs(pat("a d"), s)
        assert not occurs(pat("a d"), s, g=GapConstraints(maxgap=3))
        assert not occurs(pat("a d"), s, g=GapConstraints(maxspan=3))

    def test_negatives_do_not_affect_gaps(self):
        # gap counted on positives only: a(1) e(4) is within maxgap 3 whatever the negation
        assert occurs(pat("a !d e"), seq("a c b e"), g=GapConstraints(maxgap=3))

    def test_all_eight_configs(self):
        assert len(SemanticsConfig.all()) == 8
        assert len(set(SemanticsConfig.all())) == 8
        assert SemanticsConfig() == NEGPSPAN_SEMANTICS


TABLE1 = {
    "b !c a": ({0, 2, 3}, {0, 2, 3}),
    "b !(c d) a": ({0, 1, 2, 3}, {0, 3}),
    "b !(c d e) a": ({0, 1, 2, 3}, {0}),
    "b !(c d e g) a": ({0, 1, 2, 3, 4}, {0}),
}


class TestSupport:
    @pytest.mark.parametrize("text", list(TABLE1))
    def test_inclusion_table(self, table1_db, text):
        partial, total = TABLE1[text]
        assert set(support(pat(text), table1_db, cfg(PARTIAL))[1]) == partial
        assert set(support(pat(text), table1_db, cfg(TOTAL))[1]) == total

    def test_execution_example_pattern(self, table2_db):
        assert support(pat("a !c e"), table2_db) == (2, (2, 3))

    def test_tidset_sorted(self, table2_db):
        count, tids = support(pat("a e"), table2_db)
        assert count == 4 and tids == (0, 1, 2, 3)


class TestAbsoluteSupport:
    def test_fraction_ceiling(self):
        assert absolute_support(0.1, 500) == 50
        assert absolute_support(0.15, 7) == 2
        assert absolute_support(1.0, 4) == 4

    def test_count_passthrough(self):
        assert absolute_support(3, 500) == 3

    @pytest.mark.parametrize("bad", [0, 0.0, 1.5, -1])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            absolute_support(bad, 10)


def _grow_negatives(d):
    """Patterns ⟨x ¬q y⟩ and ⟨x ¬q' y⟩ with q ⊂ q'."""
    return st.tuples(st.integers(0, d - 1), st.integers(0, d - 1),
                     st.lists(st.integers(0, d - 1), min_size=2, max_size=4, unique=True))


class TestProperties:
    @given(patterns(d=4, max_pos=3), sequences(d=4))
    def test_soft_strict_embedding_agree_under_total(self, p, s):
        plus = positive_part(p)
        for e in positive_embeddings(plus, s):
            soft = embedding_satisfies_negatives(p, s, e, cfg(TOTAL, EmbeddingMode.SOFT))
            strict = embedding_satisfies_negatives(p, s, e, cfg(TOTAL, EmbeddingMode.STRICT))
            assert soft == strict

    @given(_grow_negatives(4), databases(d=4, max_size=3))
    def test_growing_negation_monotone_partial_antimonotone_total(self, parts, d):
        x, y, items = parts
        small, big = tuple(sorted(items[:-1])), tuple(sorted(items))
        p_small = Pattern.from_split([(x,), (y,)], [small])
        p_big = Pattern.from_split([(x,), (y,)], [big])
        ps = set(support(p_small, d, cfg(PARTIAL))[1])
        pb = set(support(p_big, d, cfg(PARTIAL))[1])
        assert ps <= pb
        ts = set(support(p_small, d, cfg(TOTAL))[1])
        tb = set(support(p_big, d, cfg(TOTAL))[1])
        assert tb <= ts

    @given(patterns(d=4, max_pos=3, neg_size=1), sequences(d=4))
    def test_single_item_negations_ignore_inclusion_mode(self, p, s):
        for emb, occ in product(EmbeddingMode, OccurrenceMode):
            assert occurs(p, s, cfg(PARTIAL, emb, occ)) == occurs(p, s, cfg(TOTAL, emb, occ))

    @given(patterns(d=4, max_pos=3), sequences(d=4),
           st.sampled_from(list(Inclusion)), st.sampled_from(list(EmbeddingMode)))
    def test_strict_occurrence_implies_soft(self, p, s, inc, emb):
        if occurs(p, s, cfg(inc, emb, OccurrenceMode.STRICT)):
            assert occurs(p, s, cfg(inc, emb, OccurrenceMode.SOFT))

    @given(patterns(d=4, max_pos=3), sequences(d=4),
           st.sampled_from([None, 1, 2, 3]), st.sampled_from([None, 1, 3, 5]))
    def test_gaps_only_remove_occurrences(self, p, s, mg, ms):
        g = GapConstraints(mg, ms)
        if occurs(p, s, cfg(), g):
            assert occurs(p, s, cfg(), NO_GAPS)
