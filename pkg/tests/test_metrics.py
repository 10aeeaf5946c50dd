"""Unit and property tests for the scoring functions."""

from __future__ import annotations

import random
from collections import Counter
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocrbench.corpus import GroundTruthEntry, SectionedText
from ocrbench.errors import EmptyReference, FieldMismatch
from ocrbench.metrics import (
    BleuParams,
    bleu,
    cer,
    evaluate_pair,
    lcs_length,
    levenshtein,
    modified_ngram_precision,
    rouge_l,
    token_f1,
    wer,
)


@lru_cache(maxsize=None)
def brute_levenshtein(a: str, b: str) -> int:
    """Plain recursive edit distance, independent of the DP implementation."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        brute_levenshtein(a[1:], b) + 1,
        brute_levenshtein(a, b[1:]) + 1,
        brute_levenshtein(a[1:], b[1:]) + (a[0] != b[0]),
    )


words = st.text(alphabet="abcde", min_size=1, max_size=6)
normalized_text = st.lists(words, min_size=1, max_size=8).map(" ".join)


class TestLevenshtein:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ("kitten", "sitting", 3),
            ("", "abc", 3),
            ("abc", "", 3),
            ("abc", "abc", 0),
            ("ab", "abcdab", 4),
        ],
    )
    def test_known_distances(self, a, b, expected):
        distance, ops = levenshtein(a, b)
        assert distance == expected
        assert ops.total == expected

    def test_empty_source_is_all_insertions(self):
        _, ops = levenshtein("", "abc")
        assert (ops.substitutions, ops.deletions, ops.insertions) == (0, 0, 3)

    def test_token_sequences(self):
        distance, _ = levenshtein(["sugar", "salt"], ["salt"])
        assert distance == 1

    @given(st.text(alphabet="abc", max_size=6), st.text(alphabet="abc", max_size=6))
    def test_matches_recursive_oracle(self, a, b):
        distance, ops = levenshtein(a, b)
        assert distance == brute_levenshtein(a, b)
        assert ops.total == distance

    @given(
        st.text(alphabet="abc", max_size=5),
        st.text(alphabet="abc", max_size=5),
        st.text(alphabet="abc", max_size=5),
    )
    def test_metric_axioms(self, a, b, c):
        d_ab, _ = levenshtein(a, b)
        d_ba, _ = levenshtein(b, a)
        d_ac, _ = levenshtein(a, c)
        d_cb, _ = levenshtein(c, b)
        assert d_ab >= 0
        assert (d_ab == 0) == (a == b)
        assert d_ab == d_ba
        assert d_ab <= d_ac + d_cb


class TestErrorRates:
    def test_cer_identity(self):
        assert cer("abc", "abc") == 0.0

    def test_cer_all_deleted(self):
        assert cer("abc", "") == 1.0

    def test_cer_can_exceed_one(self):
        assert cer("ab", "abcdab") == 2.0

    def test_cer_empty_reference(self):
        with pytest.raises(EmptyReference):
            cer("", "abc")

    @pytest.mark.parametrize(
        "ref,hyp,expected",
        [
            ("sugar salt water", "sugar salt water", 0.0),
            ("sugar salt", "salt", 0.5),
            ("a", "b c d", 3.0),
        ],
    )
    def test_wer_known_values(self, ref, hyp, expected):
        assert wer(ref, hyp) == expected

    @given(normalized_text, normalized_text)
    def test_zero_iff_equal(self, ref, hyp):
        assert (cer(ref, hyp) == 0) == (ref == hyp)
        assert (wer(ref, hyp) == 0) == (ref.split() == hyp.split())


def brute_ngram_precision(ref_tokens, hyp_tokens, n):
    """Quadratic-scan clipped counter, independent of the Counter route."""
    hyp_grams = [tuple(hyp_tokens[i : i + n]) for i in range(len(hyp_tokens) - n + 1)]
    ref_grams = [tuple(ref_tokens[i : i + n]) for i in range(len(ref_tokens) - n + 1)]
    matches = 0
    for gram in set(hyp_grams):
        matches += min(hyp_grams.count(gram), ref_grams.count(gram))
    return matches, len(hyp_grams)


class TestNgramPrecision:
    def test_identity_bigrams(self):
        assert modified_ngram_precision(["a", "b", "c"], ["a", "b", "c"], 2) == (2, 2)

    def test_clipping(self):
        assert modified_ngram_precision(["a", "a"], ["a", "a", "a"], 1) == (2, 3)

    def test_degenerate_order(self):
        assert modified_ngram_precision(["a", "b", "c"], ["a"], 2) == (0, 0)

    @given(
        st.lists(st.sampled_from("ab"), max_size=10),
        st.lists(st.sampled_from("ab"), max_size=10),
        st.integers(min_value=1, max_value=4),
    )
    def test_matches_brute_force(self, ref, hyp, n):
        assert modified_ngram_precision(ref, hyp, n) == brute_ngram_precision(ref, hyp, n)


# Pinned against tools/bleu_oracle.py (Fraction + mpmath reference
# implementation, run before this module was written).
BLEU_ORACLE_CASES = [
    ("a b c d", "a b c e", 0.43146827293898643),
    ("a b c d e f g", "a b c d e f g", 1.0),
    ("the cat sat on the mat", "the cat sat on mat", 0.5789300674674098),
    ("sugar salt water citric acid", "sugar salt citric acid", 0.18527477532266834),
    ("a b c d", "a b x y", 0.16821895003341455),
    ("ingredients sugar salt flavouring", "ingredients sugar salt flavouring preservative", 0.668740304976422),
    ("energy 450 kj protein 5 g", "energy 450 kj protein", 0.6065306597126334),
    ("a b c d e", "e d c b a", 0.06826221297363254),
    ("wheat flour sugar palm oil cocoa", "wheat flour sugar palm", 0.6065306597126334),
    ("x y z w", "x q z w", 0.1861648705529517),
    ("one two three four five six", "one two three seven five six", 0.293945703509473),
    ("a b", "a b", 1.0),
    ("a b c d", "a x", 0.06848622854477378),
    ("sugar salt", "sugar", 0.36787944117144233),
    ("a b c", "a c", 0.15968550260870695),
]


class TestBleu:
    @pytest.mark.parametrize("ref,hyp,expected", BLEU_ORACLE_CASES)
    def test_oracle_pinned_values(self, ref, hyp, expected):
        assert bleu(ref, hyp) == pytest.approx(expected, abs=1e-9)

    def test_empty_hypothesis(self):
        assert bleu("a b c", "") == 0.0

    def test_empty_reference(self):
        with pytest.raises(EmptyReference):
            bleu("", "a b")

    def test_no_smoothing_zeroes_unmatched_orders(self):
        params = BleuParams(smoothing="none")
        assert bleu("a b c d", "a b c e", params) == 0.0

    def test_bad_params_rejected(self):
        with pytest.raises(ValueError):
            BleuParams(max_order=0)
        with pytest.raises(ValueError):
            BleuParams(weights=(0.5, 0.6), max_order=2)

    @given(normalized_text)
    def test_identity_scores_one(self, text):
        assert bleu(text, text) == pytest.approx(1.0, abs=1e-12)

    @given(normalized_text, normalized_text)
    def test_bounded(self, ref, hyp):
        assert 0.0 <= bleu(ref, hyp) <= 1.0 + 1e-12


def brute_lcs(a, b):
    if not a or not b:
        return 0
    if a[-1] == b[-1]:
        return brute_lcs(a[:-1], b[:-1]) + 1
    return max(brute_lcs(a[:-1], b), brute_lcs(a, b[:-1]))


class TestRougeL:
    @pytest.mark.parametrize(
        "a,b,expected",
        [(list("abc"), list("ac"), 2), (list("abc"), list("abc"), 3), (list("abc"), list("xyz"), 0)],
    )
    def test_lcs_known(self, a, b, expected):
        assert lcs_length(a, b) == expected

    @given(
        st.lists(st.sampled_from("abc"), max_size=7),
        st.lists(st.sampled_from("abc"), max_size=7),
    )
    def test_lcs_matches_brute_force(self, a, b):
        assert lcs_length(a, b) == brute_lcs(a, b)
        assert lcs_length(a, b) == lcs_length(b, a)

    # Hand-computed: F = 2RP/(R+P) with R = LCS/|ref|, P = LCS/|hyp|.
    @pytest.mark.parametrize(
        "ref,hyp,expected",
        [
            ("a b c", "a c", 0.8),
            ("a b c d", "b d", 2 / 3),
            ("a b", "b a", 0.5),
            ("the cat sat", "the cat", 0.8),
            ("a b c", "a x b y c", 0.75),
            ("w x y z", "w x y z", 1.0),
        ],
    )
    def test_hand_cases(self, ref, hyp, expected):
        assert rouge_l(ref, hyp) == pytest.approx(expected, abs=1e-12)

    def test_disjoint_and_empty(self):
        assert rouge_l("a b", "x y") == 0.0
        assert rouge_l("a b", "") == 0.0
        with pytest.raises(EmptyReference):
            rouge_l("", "a")


class TestTokenF1:
    def test_identity(self):
        assert token_f1("a b c", "a b c") == 1.0

    def test_half_overlap(self):
        assert token_f1("sugar salt", "salt pepper") == 0.5

    def test_disjoint(self):
        assert token_f1("a b", "x y") == 0.0

    def test_multiset_counts_repeats(self):
        # Bag overlap: {a:1} vs ref {a:2} -> overlap 1, P=1, R=1/2.
        assert token_f1("a a", "a") == pytest.approx(2 / 3)

    @given(normalized_text, normalized_text)
    def test_symmetric_in_token_bags(self, ref, hyp):
        if Counter(ref.split()) == Counter(hyp.split()):
            assert token_f1(ref, hyp) == pytest.approx(1.0)


class TestMetamorphic:
    @settings(max_examples=100)
    @given(normalized_text, normalized_text, st.lists(words, min_size=1, max_size=3))
    def test_shared_suffix_never_lowers_overlap_metrics(self, ref, hyp, suffix):
        # Appending the same token suffix to both sides grows LCS and bag
        # overlap by the suffix length, so both F-measures can only rise.
        tail = " ".join(suffix)
        assert rouge_l(f"{ref} {tail}", f"{hyp} {tail}") >= rouge_l(ref, hyp) - 1e-12
        assert token_f1(f"{ref} {tail}", f"{hyp} {tail}") >= token_f1(ref, hyp) - 1e-12
        # And perfect scores stay perfect.
        assert rouge_l(f"{ref} {tail}", f"{ref} {tail}") == pytest.approx(1.0)
        assert token_f1(f"{ref} {tail}", f"{ref} {tail}") == pytest.approx(1.0)

    @settings(max_examples=200)
    @given(normalized_text, normalized_text)
    def test_edit_ops_decomposition(self, ref, hyp):
        distance, ops = levenshtein(ref, hyp)
        assert ops.substitutions + ops.deletions + ops.insertions == distance


class TestEvaluatePair:
    def _gt(self, text="sugar salt"):
        return GroundTruthEntry("p1", "img (1).jpg", "ingredients", text)

    def _pred(self, text, field="ingredients"):
        return SectionedText("p1", "img (1).jpg", field, text)

    def test_perfect_match(self):
        row = evaluate_pair(self._gt(), self._pred("sugar salt"))
        assert (row.cer, row.wer, row.bleu, row.rouge_l, row.f1) == (0.0, 0.0, 1.0, 1.0, 1.0)
        assert not row.missing

    def test_missing_prediction_convention(self):
        row = evaluate_pair(self._gt(), None)
        assert (row.cer, row.wer, row.bleu, row.rouge_l, row.f1) == (1.0, 1.0, 0.0, 0.0, 0.0)
        assert row.missing

    def test_partial_prediction_matches_component_metrics(self):
        row = evaluate_pair(self._gt("sugar salt"), self._pred("sugar"))
        assert row.cer == cer("sugar salt", "sugar")
        assert row.wer == 0.5
        assert row.f1 == token_f1("sugar salt", "sugar")

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatch):
            evaluate_pair(self._gt(), self._pred("sugar salt", field="nfp"))


def test_acceptance_style_random_sample_against_oracle():
    rng = random.Random(7)
    for _ in range(500):
        a = "".join(rng.choice("abc") for _ in range(rng.randint(0, 6)))
        b = "".join(rng.choice("abc") for _ in range(rng.randint(0, 6)))
        assert levenshtein(a, b)[0] == brute_levenshtein(a, b)
