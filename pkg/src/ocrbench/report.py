"""Serialization of metric rows and per-model summaries.

Row-level output is CSV (the canonical format for downstream tooling);
summaries are JSON plus an optional plain-text rendering shaped like the
usual three benchmark tables (semantic scores + coverage, CER/WER
mean ± SD, and execution time).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .aggregate import METRIC_NAMES, AggregateReport
from .errors import EmptyInput, IoFailure
from .metrics import MetricRow

METRIC_ROWS_HEADER = [
    "product_id",
    "image_filename",
    "text_type",
    "cer",
    "wer",
    "bleu",
    "rouge_l",
    "f1",
    "missing",
]

SCHEMA_PATH = Path(__file__).parent / "summary.schema.json"


def write_metric_rows(rows: list[MetricRow], path: str | Path, allow_empty: bool = False) -> None:
    """Write per-image scores as CSV, sorted, with 6-decimal floats."""
    if not rows and not allow_empty:
        raise EmptyInput("refusing to write an empty metric-rows file without allow_empty")
    ordered = sorted(rows, key=lambda r: (r.product_key, r.image_filename, r.field_type))
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(METRIC_ROWS_HEADER)
            for r in ordered:
                writer.writerow(
                    [
                        r.product_key,
                        r.image_filename,
                        r.field_type,
                        f"{r.cer:.6f}",
                        f"{r.wer:.6f}",
                        f"{r.bleu:.6f}",
                        f"{r.rouge_l:.6f}",
                        f"{r.f1:.6f}",
                        "true" if r.missing else "false",
                    ]
                )
    except OSError as exc:
        raise IoFailure(f"cannot write metric rows to {path}: {exc}") from exc


def read_metric_rows(path: str | Path) -> list[MetricRow]:
    """Parse a metric-rows CSV back into MetricRow objects (round-trip)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            MetricRow(
                product_key=row["product_id"],
                image_filename=row["image_filename"],
                field_type=row["text_type"],
                cer=float(row["cer"]),
                wer=float(row["wer"]),
                bleu=float(row["bleu"]),
                rouge_l=float(row["rouge_l"]),
                f1=float(row["f1"]),
                missing=row["missing"] == "true",
            )
            for row in reader
        ]


def summary_to_dict(report: AggregateReport) -> dict:
    cov = report.coverage
    return {
        "model_name": report.model_name,
        "image_count": report.image_count,
        "metrics": {
            name: {"mean": report.means[name], "sd": report.sds[name]}
            for name in METRIC_NAMES
        },
        "coverage": None
        if cov is None
        else {
            "product_pct": cov.product_pct,
            "ingredients_pct": cov.ingredients_pct,
            "nfp_pct": cov.nfp_pct,
            "denominators": {
                "product": cov.product_denominator,
                "ingredients": cov.ingredients_denominator,
                "nfp": cov.nfp_denominator,
            },
        },
        "timing": {
            "total_s": report.total_time_s,
            "mean_per_image_s": report.mean_time_per_image_s,
        },
    }


def write_summary(
    reports: list[AggregateReport],
    json_path: str | Path,
    text_path: str | Path | None = None,
) -> None:
    """Write the machine summary (JSON) and optionally the text tables."""
    if not reports:
        raise EmptyInput("write_summary needs at least one report")
    doc = {"models": [summary_to_dict(r) for r in reports]}
    try:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        if text_path is not None:
            with open(text_path, "w", encoding="utf-8") as fh:
                fh.write(render_summary_tables(reports))
    except OSError as exc:
        raise IoFailure(f"cannot write summary: {exc}") from exc


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def render_summary_tables(reports: list[AggregateReport]) -> str:
    """Render the three human-readable summary tables."""
    semantic = _table(
        ["Model", "Coverage (%)", "BLEU", "ROUGE-L", "F1"],
        [
            [
                r.model_name,
                _pct(r.coverage.product_pct if r.coverage else None),
                f"{r.means['bleu']:.3f}",
                f"{r.means['rouge_l']:.3f}",
                f"{r.means['f1']:.3f}",
            ]
            for r in reports
        ],
    )
    error_rates = _table(
        ["Model", "CER mean ± SD", "WER mean ± SD"],
        [
            [
                r.model_name,
                f"{r.means['cer']:.3f} ± {r.sds['cer']:.3f}",
                f"{r.means['wer']:.3f} ± {r.sds['wer']:.3f}",
            ]
            for r in reports
        ],
    )
    timing = _table(
        ["Model", "Total Time (s)", "Avg Time/Image (s)"],
        [
            [r.model_name, f"{r.total_time_s:.2f}", f"{r.mean_time_per_image_s:.2f}"]
            for r in reports
        ],
    )
    return (
        "Semantic performance\n"
        + semantic
        + "\nPer-image error rates\n"
        + error_rates
        + "\nExecution time\n"
        + timing
    )
