"""Per-image scoring: edit distance, CER, WER, BLEU, ROUGE-L, and token F1.

All string metrics operate on already-normalized text; word-level metrics
share the whitespace tokenizer from textnorm. CER and WER may exceed 1 on
short references; BLEU, ROUGE-L, and F1 are always in [0, 1].
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyReference, FieldMismatch
from .textnorm import tokenize

# Chen & Cherry (2014) smoothing method 4 constant.
SMOOTHING_K = 5


@dataclass(frozen=True)
class EditOps:
    """Decomposition of one optimal alignment into edit operation counts."""

    substitutions: int
    deletions: int
    insertions: int

    @property
    def total(self) -> int:
        return self.substitutions + self.deletions + self.insertions


@dataclass(frozen=True)
class BleuParams:
    max_order: int = 4
    weights: tuple[float, ...] | None = None  # None -> uniform 1/max_order
    smoothing: str = "method4"  # "none" or "method4"

    def __post_init__(self) -> None:
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.weights is not None:
            if len(self.weights) != self.max_order:
                raise ValueError("weights length must equal max_order")
            if abs(sum(self.weights) - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")
        if self.smoothing not in ("none", "method4"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")

    def weight_vector(self) -> tuple[float, ...]:
        if self.weights is not None:
            return self.weights
        return tuple(1.0 / self.max_order for _ in range(self.max_order))


@dataclass(frozen=True)
class MetricRow:
    """All five per-image scores for one (image, field) pair."""

    product_key: str
    image_filename: str
    field_type: str
    cer: float
    wer: float
    bleu: float
    rouge_l: float
    f1: float
    missing: bool = False


def levenshtein(a: Sequence, b: Sequence) -> tuple[int, EditOps]:
    """Minimal unit-cost edit distance with an S/D/I decomposition.

    Works on strings (character level) or token lists (word level). The
    decomposition comes from backtracking one optimal alignment, so
    S + D + I always equals the distance. Deletions remove elements of
    `a` (the reference); insertions add elements of `b`.
    """
    m, n = len(a), len(b)
    # dp[i][j] = distance between a[:i] and b[:j]
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dp[i][0] = i
    for j in range(n + 1):
        dp[0][j] = j
    for i in range(1, m + 1):
        ai = a[i - 1]
        row, prev = dp[i], dp[i - 1]
        for j in range(1, n + 1):
            cost = 0 if ai == b[j - 1] else 1
            row[j] = min(prev[j] + 1, row[j - 1] + 1, prev[j - 1] + cost)
    subs = dels = ins = 0
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1):
            if a[i - 1] != b[j - 1]:
                subs += 1
            i, j = i - 1, j - 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return dp[m][n], EditOps(subs, dels, ins)


def cer(reference: str, hypothesis: str) -> float:
    """Character error rate: edit distance / reference length. May exceed 1."""
    if not reference:
        raise EmptyReference("CER needs a non-empty reference")
    distance, _ = levenshtein(reference, hypothesis)
    return distance / len(reference)


def wer(reference: str, hypothesis: str) -> float:
    """Word error rate: token-level edit distance / reference token count."""
    ref_tokens = tokenize(reference)
    if not ref_tokens:
        raise EmptyReference("WER needs a reference with at least one token")
    distance, _ = levenshtein(ref_tokens, tokenize(hypothesis))
    return distance / len(ref_tokens)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def modified_ngram_precision(
    ref_tokens: Sequence[str], hyp_tokens: Sequence[str], n: int
) -> tuple[int, int]:
    """Clipped n-gram counts: (matches, total hypothesis n-grams)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(hyp_tokens) < n:
        return 0, 0
    hyp_counts = _ngrams(hyp_tokens, n)
    ref_counts = _ngrams(ref_tokens, n)
    matches = sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())
    return matches, sum(hyp_counts.values())


def bleu(reference: str, hypothesis: str, params: BleuParams | None = None) -> float:
    """Sentence-level BLEU with brevity penalty and method-4 smoothing.

    Orders for which the hypothesis has no n-grams at all are dropped and
    the remaining weights renormalized, so identical strings score 1 even
    below max_order tokens. Orders with n-grams but zero matches get the
    Chen & Cherry method-4 substitute ln(hyp_len) / (2^i * K * total) with
    an incrementing counter i; with smoothing "none" they force a 0 score.
    Zero unigram matches or an empty hypothesis give 0.
    """
    params = params or BleuParams()
    if not reference:
        raise EmptyReference("BLEU needs a non-empty reference")
    ref_tokens = tokenize(reference)
    hyp_tokens = tokenize(hypothesis)
    if not ref_tokens:
        raise EmptyReference("BLEU needs a reference with at least one token")
    if not hyp_tokens:
        return 0.0

    counts = []
    weights = []
    for n, w in enumerate(params.weight_vector(), start=1):
        matches, total = modified_ngram_precision(ref_tokens, hyp_tokens, n)
        if total == 0:
            continue
        counts.append((matches, total))
        weights.append(w)
    if counts[0][0] == 0:
        return 0.0

    hyp_len = len(hyp_tokens)
    log_precisions = []
    smooth_counter = 1
    for matches, total in counts:
        if matches > 0:
            log_precisions.append(math.log(matches / total))
        elif params.smoothing == "method4" and hyp_len > 1:
            substitute = math.log(hyp_len) / (2**smooth_counter * SMOOTHING_K * total)
            smooth_counter += 1
            log_precisions.append(math.log(substitute))
        else:
            return 0.0

    weight_sum = sum(weights)
    geo_mean = math.exp(
        sum(w / weight_sum * lp for w, lp in zip(weights, log_precisions))
    )
    c, r = hyp_len, len(ref_tokens)
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return bp * geo_mean


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Longest common subsequence length via dynamic programming."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(reference: str, hypothesis: str, beta: float = 1.0) -> float:
    """Token-level LCS F-measure with equal precision/recall weighting."""
    ref_tokens = tokenize(reference)
    if not ref_tokens:
        raise EmptyReference("ROUGE-L needs a reference with at least one token")
    hyp_tokens = tokenize(hypothesis)
    if not hyp_tokens:
        return 0.0
    lcs = lcs_length(ref_tokens, hyp_tokens)
    if lcs == 0:
        return 0.0
    recall = lcs / len(ref_tokens)
    precision = lcs / len(hyp_tokens)
    return (1 + beta**2) * recall * precision / (recall + beta**2 * precision)


def token_f1(reference: str, hypothesis: str) -> float:
    """Harmonic mean of bag-of-tokens precision and recall.

    Multiset overlap, so repeated tokens must match in count.
    """
    ref_tokens = tokenize(reference)
    if not ref_tokens:
        raise EmptyReference("F1 needs a reference with at least one token")
    hyp_tokens = tokenize(hypothesis)
    if not hyp_tokens:
        return 0.0
    overlap = sum((Counter(ref_tokens) & Counter(hyp_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(hyp_tokens)
    recall = overlap / len(ref_tokens)
    return 2 * precision * recall / (precision + recall)


def evaluate_pair(gt, pred, params: BleuParams | None = None) -> MetricRow:
    """Score one prediction against its ground-truth entry.

    `gt` is a GroundTruthEntry and `pred` a SectionedText (or None). Both
    texts must already be normalized. A missing or empty prediction scores
    CER = WER = 1.0 and BLEU = ROUGE-L = F1 = 0, flagged missing.
    """
    if pred is not None:
        if pred.image_filename != gt.image_filename or pred.field_type != gt.field_type:
            raise FieldMismatch(
                f"prediction ({pred.image_filename}, {pred.field_type}) does not match "
                f"ground truth ({gt.image_filename}, {gt.field_type})"
            )
    text = pred.text if pred is not None else ""
    if not text:
        return MetricRow(
            product_key=gt.product_key,
            image_filename=gt.image_filename,
            field_type=gt.field_type,
            cer=1.0,
            wer=1.0,
            bleu=0.0,
            rouge_l=0.0,
            f1=0.0,
            missing=True,
        )
    return MetricRow(
        product_key=gt.product_key,
        image_filename=gt.image_filename,
        field_type=gt.field_type,
        cer=cer(gt.gt_text, text),
        wer=wer(gt.gt_text, text),
        bleu=bleu(gt.gt_text, text, params),
        rouge_l=rouge_l(gt.gt_text, text),
        f1=token_f1(gt.gt_text, text),
        missing=False,
    )
