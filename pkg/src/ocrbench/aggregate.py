"""Per-model summary statistics, two-level coverage, and timing totals."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .corpus import ImageRecord
from .errors import EmptyInput, MissingTiming, NoProductsWithField
from .metrics import MetricRow
from .textnorm import FIELD_INGREDIENTS, FIELD_NFP


@dataclass(frozen=True)
class CoverageReport:
    """Product-level and per-field coverage percentages with denominators."""

    product_pct: float
    ingredients_pct: float | None
    nfp_pct: float | None
    product_denominator: int
    ingredients_denominator: int
    nfp_denominator: int


@dataclass(frozen=True)
class AggregateReport:
    model_name: str
    image_count: int
    means: dict[str, float] = field(default_factory=dict)  # metric -> mean
    sds: dict[str, float] = field(default_factory=dict)  # metric -> sample SD
    coverage: CoverageReport | None = None
    total_time_s: float = 0.0
    mean_time_per_image_s: float = 0.0


METRIC_NAMES = ("cer", "wer", "bleu", "rouge_l", "f1")


def mean_sd(values: list[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (n-1 denominator; 0 when n=1)."""
    if not values:
        raise EmptyInput("mean_sd over an empty list")
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


def product_coverage(
    selected: dict[tuple[str, str], str],
    field_presence: dict[str, set[str]],
) -> tuple[float, int, int]:
    """Fraction of products whose present fields yielded any non-empty text.

    `selected` maps (product, field) to the selected sectioned text;
    `field_presence` maps each product to the fields it actually carries.
    Returns (percentage, covered count, denominator). Products with no
    present fields are excluded from the denominator.
    """
    denominator = sum(1 for fields in field_presence.values() if fields)
    covered = 0
    for product, fields in field_presence.items():
        if not fields:
            continue
        if any(selected.get((product, ft), "") for ft in fields):
            covered += 1
    pct = 100.0 * covered / denominator if denominator else 0.0
    return pct, covered, denominator


def field_coverage(
    field_type: str,
    selected: dict[tuple[str, str], str],
    field_presence: dict[str, set[str]],
) -> tuple[float, int, int]:
    """Coverage for one field over only the products that contain it."""
    with_field = [p for p, fields in field_presence.items() if field_type in fields]
    if not with_field:
        raise NoProductsWithField(f"no products contain field {field_type!r}")
    covered = sum(1 for p in with_field if selected.get((p, field_type), ""))
    return 100.0 * covered / len(with_field), covered, len(with_field)


def build_coverage(
    selected: dict[tuple[str, str], str],
    field_presence: dict[str, set[str]],
) -> CoverageReport:
    product_pct, _, product_den = product_coverage(selected, field_presence)
    per_field = {}
    for ft in (FIELD_INGREDIENTS, FIELD_NFP):
        try:
            pct, _, den = field_coverage(ft, selected, field_presence)
        except NoProductsWithField:
            pct, den = None, 0
        per_field[ft] = (pct, den)
    return CoverageReport(
        product_pct=product_pct,
        ingredients_pct=per_field[FIELD_INGREDIENTS][0],
        nfp_pct=per_field[FIELD_NFP][0],
        product_denominator=product_den,
        ingredients_denominator=per_field[FIELD_INGREDIENTS][1],
        nfp_denominator=per_field[FIELD_NFP][1],
    )


def timing_aggregate(records: list[ImageRecord]) -> tuple[float, float]:
    """Total and mean per-image seconds over records with timing present."""
    if not records:
        raise MissingTiming("no records to aggregate timing over")
    times = []
    for record in records:
        if record.time_seconds is None:
            raise MissingTiming(f"record {record.image_filename!r} has no time_seconds")
        times.append(record.time_seconds)
    total = sum(times)
    return total, total / len(times)


def build_aggregate(
    model_name: str,
    rows: list[MetricRow],
    coverage: CoverageReport | None = None,
    total_time_s: float = 0.0,
    mean_time_per_image_s: float = 0.0,
) -> AggregateReport:
    """Reduce per-image metric rows into one AggregateReport.

    Rows are consumed in deterministic (product, filename, field) order so
    results do not depend on upstream parallelism.
    """
    if not rows:
        raise EmptyInput(f"no metric rows for model {model_name!r}")
    ordered = sorted(rows, key=lambda r: (r.product_key, r.image_filename, r.field_type))
    means, sds = {}, {}
    for name in METRIC_NAMES:
        means[name], sds[name] = mean_sd([getattr(r, name) for r in ordered])
    return AggregateReport(
        model_name=model_name,
        image_count=len(ordered),
        means=means,
        sds=sds,
        coverage=coverage,
        total_time_s=total_time_s,
        mean_time_per_image_s=mean_time_per_image_s,
    )
