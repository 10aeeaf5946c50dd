"""Text normalization applied to every engine's raw output before scoring.

Pipeline order: lowercase -> drop characters outside the keep-set ->
collapse whitespace -> (optionally) extract the text after the first
field anchor keyword. All comparisons operate on Unicode scalar values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

FIELD_INGREDIENTS = "ingredients"
FIELD_NFP = "nfp"
FIELD_TYPES = (FIELD_INGREDIENTS, FIELD_NFP)

# Punctuation that carries meaning in ingredient lists and nutrition tables
# ("100g", "2%", "(emulsifier)", "e330/e331"); everything else is OCR noise.
DEFAULT_KEEP_PUNCT = ".,%():-/"

DEFAULT_ANCHORS = {
    FIELD_INGREDIENTS: ["ingredients:", "ingredients", "ingrediente", "bestanddele"],
    FIELD_NFP: [
        "nutrition information",
        "nutritional information",
        "nutrition facts",
        "typical nutritional information",
    ],
}


@dataclass(frozen=True)
class NormalizationConfig:
    """Character keep-set and per-field anchor keyword lists."""

    keep_punct: str = DEFAULT_KEEP_PUNCT
    anchors: dict[str, list[str]] = field(
        default_factory=lambda: {k: list(v) for k, v in DEFAULT_ANCHORS.items()}
    )
    collapse_whitespace: bool = True  # always true; kept for config round-trips

    def __post_init__(self) -> None:
        for ft in FIELD_TYPES:
            if not self.anchors.get(ft):
                raise ValueError(f"anchor list for {ft!r} must be non-empty")

    def anchors_for(self, field_type: str) -> list[str]:
        return self.anchors[field_type]

    @classmethod
    def from_json(cls, path: str | Path) -> "NormalizationConfig":
        """Load from a JSON file with keys keep_charset, anchors.ingredients, anchors.nfp."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        kwargs = {}
        if "keep_charset" in data:
            kwargs["keep_punct"] = data["keep_charset"]
        if "anchors" in data:
            anchors = {k: list(v) for k, v in DEFAULT_ANCHORS.items()}
            anchors.update({k: list(v) for k, v in data["anchors"].items()})
            kwargs["anchors"] = anchors
        return cls(**kwargs)


class AnchorResult(NamedTuple):
    text: str
    anchor_found: bool


def _keep_char(ch: str, cfg: NormalizationConfig) -> bool:
    return ch.isalnum() or ch == " " or ch in cfg.keep_punct


def normalize_text(raw: str, cfg: NormalizationConfig | None = None) -> str:
    """Lowercase, strip disallowed characters, and collapse whitespace.

    Idempotent; empty input yields empty output.
    """
    cfg = cfg or NormalizationConfig()
    lowered = raw.lower()
    filtered = "".join(ch if _keep_char(ch, cfg) else " " for ch in lowered)
    return " ".join(filtered.split())


def extract_after_keyword(
    text: str, field_type: str, cfg: NormalizationConfig | None = None
) -> AnchorResult:
    """Return the text after the earliest anchor keyword for the field.

    The anchor itself is dropped. When no anchor occurs the input is returned
    unchanged with anchor_found=False. Input is expected lowercased; the
    result is always a suffix of the input.
    """
    cfg = cfg or NormalizationConfig()
    best: tuple[int, int] | None = None  # (position, -len) so longer wins ties
    for kw in cfg.anchors_for(field_type):
        pos = text.find(kw)
        if pos < 0:
            continue
        key = (pos, -len(kw))
        if best is None or key < best:
            best = key
    if best is None:
        return AnchorResult(text, False)
    pos, neg_len = best
    return AnchorResult(text[pos - neg_len :].lstrip(), True)


def tokenize(text: str) -> list[str]:
    """Split on whitespace, dropping empty tokens."""
    return text.split()
