"""Independent sentence-BLEU oracle used to pin expected values before the
main implementation was written.

Computes clipped n-gram precisions with exact Fraction arithmetic and the
final geometric mean with mpmath, so it shares no code with the package.

Smoothing (Chen & Cherry 2014, method 4): for each order with zero matches
and hypothesis length > 1, substitute

    p_n = ln(hyp_len) / (2**i * K * denominator),  K = 5,

where i is an incrementing counter starting at 1 over the smoothed orders.
Orders for which the hypothesis yields no n-grams at all are dropped and the
remaining weights renormalized, so identical strings always score 1. Zero
unigram matches or an empty hypothesis give BLEU = 0.
"""

from collections import Counter
from fractions import Fraction

import mpmath

K = 5


def ngrams(tokens, n):
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def oracle_bleu(reference: str, hypothesis: str, max_order: int = 4) -> float:
    ref = reference.split()
    hyp = hypothesis.split()
    if not hyp:
        return 0.0
    nums, dens = [], []
    for n in range(1, max_order + 1):
        if len(hyp) < n:
            break  # degenerate order: no n-grams, dropped from the mean
        hyp_counts = Counter(ngrams(hyp, n))
        ref_counts = Counter(ngrams(ref, n))
        nums.append(sum(min(c, ref_counts[g]) for g, c in hyp_counts.items()))
        dens.append(len(hyp) - n + 1)
    if nums[0] == 0:
        return 0.0
    mpmath.mp.dps = 50
    hyp_len = len(hyp)
    precisions = []
    incvnt = 1
    for num, den in zip(nums, dens):
        if num == 0:
            if hyp_len <= 1:
                return 0.0
            precisions.append(mpmath.log(hyp_len) / (2**incvnt * K * den))
            incvnt += 1
        else:
            precisions.append(mpmath.mpf(Fraction(num, den).numerator) / Fraction(num, den).denominator)
    w = mpmath.mpf(1) / len(precisions)
    log_sum = mpmath.fsum(w * mpmath.log(p) for p in precisions)
    c, r = len(hyp), len(ref)
    bp = mpmath.mpf(1) if c > r else mpmath.e ** (1 - mpmath.mpf(r) / c)
    return float(bp * mpmath.e**log_sum)


CASES = [
    ("a b c d", "a b c e"),
    ("a b c d e f g", "a b c d e f g"),
    ("the cat sat on the mat", "the cat sat on mat"),
    ("sugar salt water citric acid", "sugar salt citric acid"),
    ("a b c d", "a b x y"),
    ("ingredients sugar salt flavouring", "ingredients sugar salt flavouring preservative"),
    ("energy 450 kj protein 5 g", "energy 450 kj protein"),
    ("a b c d e", "e d c b a"),
    ("wheat flour sugar palm oil cocoa", "wheat flour sugar palm"),
    ("a b", "a b"),
    ("x y z w", "x q z w"),
    ("one two three four five six", "one two three seven five six"),
    ("a b", "a b"),
    ("a b c d", "a x"),
    ("sugar salt", "sugar"),
    ("a b c", "a c"),
]

if __name__ == "__main__":
    for ref, hyp in CASES:
        print(f'("{ref}", "{hyp}", {oracle_bleu(ref, hyp)!r}),')
