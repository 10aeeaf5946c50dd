"""Assignment of OCR text blocks to ingredient-list or NFP fields.

Primary route: keyword classification with keyword density as the
tie-breaker. Fallback route (for fragmented transformer-style output):
fuzzy matching of anchor keywords via a sliding-window partial ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyNeedle
from .metrics import levenshtein
from .textnorm import (
    FIELD_INGREDIENTS,
    FIELD_NFP,
    NormalizationConfig,
    tokenize,
)

FIELD_UNCLASSIFIED = "unclassified"

DEFAULT_FUZZY_THRESHOLD = 80


@dataclass(frozen=True)
class FuzzyConfig:
    """Minimum partial-ratio score (0-100) for a fuzzy classification."""

    threshold: int = DEFAULT_FUZZY_THRESHOLD

    def __post_init__(self) -> None:
        if not 0 <= self.threshold <= 101:
            raise ValueError("threshold must be in [0, 101]")


@dataclass(frozen=True)
class ClassifiedBlock:
    product_key: str
    image_filename: str
    field_type: str  # ingredients / nfp / unclassified
    text: str
    density: float
    method: str  # "keyword" or "fuzzy"


def _count_anchor_hits(text: str, anchors: list[str]) -> int:
    """Count non-overlapping anchor occurrences, longest anchor first.

    Matched spans are consumed so "ingredients:" is one hit, not a hit for
    both "ingredients:" and "ingredients".
    """
    ordered = sorted(anchors, key=len, reverse=True)
    hits = 0
    pos = 0
    while pos < len(text):
        for anchor in ordered:
            if text.startswith(anchor, pos):
                hits += 1
                pos += len(anchor)
                break
        else:
            pos += 1
    return hits


def keyword_density(text: str, field_type: str, cfg: NormalizationConfig | None = None) -> float:
    """Anchor-keyword hits divided by token count; 0 for empty text."""
    cfg = cfg or NormalizationConfig()
    tokens = tokenize(text)
    if not tokens:
        return 0.0
    return _count_anchor_hits(text, cfg.anchors_for(field_type)) / len(tokens)


def classify_text(text: str, cfg: NormalizationConfig | None = None) -> str:
    """Assign normalized text to the field with the higher keyword density.

    Both densities zero -> unclassified; equal positive densities break
    toward ingredients (the more specific anchor set).
    """
    cfg = cfg or NormalizationConfig()
    d_ing = keyword_density(text, FIELD_INGREDIENTS, cfg)
    d_nfp = keyword_density(text, FIELD_NFP, cfg)
    if d_ing == 0 and d_nfp == 0:
        return FIELD_UNCLASSIFIED
    return FIELD_NFP if d_nfp > d_ing else FIELD_INGREDIENTS


def partial_ratio(needle: str, haystack: str) -> int:
    """Best normalized similarity of `needle` against any equal-length
    window of `haystack`, scaled to 0-100.

    Window length is min(len(needle), len(haystack)); windows slide by one
    character; similarity is 1 - levenshtein/max(len). Empty haystack
    scores 0.
    """
    if not needle:
        raise EmptyNeedle("partial_ratio needs a non-empty needle")
    if not haystack:
        return 0
    width = min(len(needle), len(haystack))
    best = 0.0
    for start in range(len(haystack) - width + 1):
        window = haystack[start : start + width]
        distance, _ = levenshtein(needle, window)
        sim = 1 - distance / max(len(needle), width)
        if sim > best:
            best = sim
            if best == 1.0:
                break
    return round(100 * best)


def classify_fuzzy(
    text: str,
    cfg: NormalizationConfig | None = None,
    fz: FuzzyConfig | None = None,
) -> str:
    """Classify by the best anchor partial-ratio score per field.

    Returns the field whose best-scoring anchor is highest and meets the
    threshold; unclassified otherwise. Ties break toward ingredients.
    """
    cfg = cfg or NormalizationConfig()
    fz = fz or FuzzyConfig()
    if not text:
        return FIELD_UNCLASSIFIED
    best_ing = max(partial_ratio(a, text) for a in cfg.anchors_for(FIELD_INGREDIENTS))
    best_nfp = max(partial_ratio(a, text) for a in cfg.anchors_for(FIELD_NFP))
    best = max(best_ing, best_nfp)
    if best < fz.threshold:
        return FIELD_UNCLASSIFIED
    return FIELD_NFP if best_nfp > best_ing else FIELD_INGREDIENTS


def select_candidate(
    blocks: list[ClassifiedBlock], product_key: str, field_type: str
) -> ClassifiedBlock | None:
    """Pick the best block for one (product, field): max keyword density,
    ties broken by longer text, then lexicographically smallest filename."""
    candidates = [
        b for b in blocks if b.product_key == product_key and b.field_type == field_type
    ]
    if not candidates:
        return None
    return min(candidates, key=lambda b: (-b.density, -len(b.text), b.image_filename))
