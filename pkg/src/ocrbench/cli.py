"""Command-line entry points: section, evaluate, run, and report.

Exit codes: 0 success, 1 fatal input error, 2 adapter failure in strict
mode. The config path falls back to the OCRBENCH_CONFIG environment
variable when --config is not given.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import shlex
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import corpus, report
from .aggregate import (
    AggregateReport,
    CoverageReport,
    build_aggregate,
    build_coverage,
    timing_aggregate,
)
from .corpus import GroundTruthEntry, ImageRecord, SectionedText
from .errors import AdapterFailure, IoFailure, MalformedFilename, OcrBenchError
from .metrics import BleuParams, MetricRow, evaluate_pair
from .sectioner import (
    FIELD_UNCLASSIFIED,
    ClassifiedBlock,
    FuzzyConfig,
    classify_fuzzy,
    classify_text,
    keyword_density,
    select_candidate,
)
from .textnorm import FIELD_TYPES, NormalizationConfig, extract_after_keyword, normalize_text

log = logging.getLogger(__name__)

IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png")


def _map_jobs(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def section_records(
    records: list[ImageRecord],
    cfg: NormalizationConfig,
    fuzzy: bool = False,
    fuzzy_threshold: int | None = None,
    jobs: int = 1,
    preassigned: dict[tuple[str, str], str] | None = None,
) -> list[SectionedText]:
    """Normalize, classify, select the best block per (product, field), and
    extract the text after the field anchor.

    `preassigned` maps (image_filename, product_key) to a known field type
    (used when re-sectioning already-sectioned output); those records skip
    classification.
    """
    fz = FuzzyConfig(threshold=fuzzy_threshold) if fuzzy_threshold is not None else FuzzyConfig()

    def classify(record: ImageRecord) -> ClassifiedBlock:
        text = normalize_text(record.raw_text, cfg)
        key = (record.image_filename, record.product_key)
        if preassigned and key in preassigned:
            field_type = preassigned[key]
            method = "keyword"
        else:
            field_type = classify_text(text, cfg)
            method = "keyword"
            if field_type == FIELD_UNCLASSIFIED and fuzzy:
                field_type = classify_fuzzy(text, cfg, fz)
                method = "fuzzy"
        density = (
            keyword_density(text, field_type, cfg)
            if field_type != FIELD_UNCLASSIFIED
            else 0.0
        )
        return ClassifiedBlock(
            product_key=record.product_key,
            image_filename=record.image_filename,
            field_type=field_type,
            text=text,
            density=density,
            method=method,
        )

    blocks = [b for b in _map_jobs(classify, records, jobs) if b.field_type != FIELD_UNCLASSIFIED]

    out: list[SectionedText] = []
    for product_key in sorted({b.product_key for b in blocks}):
        for field_type in FIELD_TYPES:
            best = select_candidate(blocks, product_key, field_type)
            if best is None:
                continue
            extracted = extract_after_keyword(best.text, field_type, cfg)
            out.append(
                SectionedText(
                    product_key=product_key,
                    image_filename=best.image_filename,
                    field_type=field_type,
                    text=extracted.text,
                )
            )
    out.sort(key=lambda s: (s.product_key, s.image_filename, s.field_type))
    return out


def write_sectioned(rows: list[SectionedText], path: str | Path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(corpus.SECTIONED_HEADER)
            for r in rows:
                writer.writerow([r.product_key, r.image_filename, r.field_type, r.text])
    except OSError as exc:
        raise IoFailure(f"cannot write sectioned CSV to {path}: {exc}") from exc


def _is_sectioned_file(path: str | Path) -> bool:
    with open(path, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), [])
    return "ocr_text" in header


def evaluate_rows(
    sectioned: list[SectionedText],
    ground_truth: list[GroundTruthEntry],
    cfg: NormalizationConfig,
    skip_missing: bool = False,
    jobs: int = 1,
    bleu_params: BleuParams | None = None,
) -> tuple[list[MetricRow], CoverageReport]:
    """Score every ground-truth (image, field) pair against the sectioned
    predictions and compute coverage.

    Missing predictions score the documented convention unless skip_missing
    excludes them from the rows (coverage denominators are unaffected).
    """
    by_key = {(s.image_filename, s.field_type): s for s in sectioned}

    def score(gt: GroundTruthEntry) -> MetricRow:
        gt_norm = GroundTruthEntry(
            product_key=gt.product_key,
            image_filename=gt.image_filename,
            field_type=gt.field_type,
            gt_text=normalize_text(gt.gt_text, cfg),
        )
        pred = by_key.get((gt.image_filename, gt.field_type))
        if pred is not None:
            pred = SectionedText(
                product_key=pred.product_key,
                image_filename=pred.image_filename,
                field_type=pred.field_type,
                text=normalize_text(pred.text, cfg),
            )
        return evaluate_pair(gt_norm, pred, bleu_params)

    ordered_gt = sorted(ground_truth, key=lambda g: (g.product_key, g.image_filename, g.field_type))
    rows = _map_jobs(score, ordered_gt, jobs)
    if skip_missing:
        rows = [r for r in rows if not r.missing]

    field_presence: dict[str, set[str]] = {}
    for gt in ground_truth:
        field_presence.setdefault(gt.product_key, set()).add(gt.field_type)
    selected = {(s.product_key, s.field_type): s.text for s in sectioned}
    coverage = build_coverage(selected, field_presence)
    return rows, coverage


def _load_config(args) -> NormalizationConfig:
    path = args.config or os.environ.get("OCRBENCH_CONFIG")
    if path:
        return NormalizationConfig.from_json(path)
    return NormalizationConfig()


def cmd_section(args) -> int:
    cfg = _load_config(args)
    if _is_sectioned_file(args.input):
        prior = corpus.load_sectioned(args.input)
        records = [
            ImageRecord(product_key=s.product_key, image_filename=s.image_filename, raw_text=s.text)
            for s in prior
        ]
        preassigned = {(s.image_filename, s.product_key): s.field_type for s in prior}
    else:
        records = corpus.load_predictions(args.input, strict=args.strict)
        preassigned = None
    rows = section_records(
        records,
        cfg,
        fuzzy=args.fuzzy,
        fuzzy_threshold=args.fuzzy_threshold,
        jobs=args.jobs,
        preassigned=preassigned,
    )
    write_sectioned(rows, args.output)
    log.info("wrote %d sectioned rows to %s", len(rows), args.output)
    return 0


def cmd_evaluate(args) -> int:
    cfg = _load_config(args)
    sectioned = corpus.load_sectioned(args.sectioned)
    ground_truth = corpus.load_ground_truth(args.ground_truth)
    rows, coverage = evaluate_rows(
        sectioned, ground_truth, cfg, skip_missing=args.skip_missing, jobs=args.jobs
    )
    total_s = mean_s = 0.0
    if args.timing_csv and not args.no_timing:
        total_s, mean_s = timing_aggregate(corpus.load_predictions(args.timing_csv))
    aggregate = build_aggregate(
        args.model_name,
        rows,
        coverage=coverage,
        total_time_s=total_s,
        mean_time_per_image_s=mean_s,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.write_metric_rows(rows, out_dir / "metrics.csv", allow_empty=args.allow_empty)
    report.write_summary([aggregate], out_dir / "summary.json", out_dir / "summary.txt")
    return 0


def _run_adapter(command: list[str], image: Path, out_csv: Path) -> list[ImageRecord]:
    proc = subprocess.run(
        command + ["--input", str(image), "--output", str(out_csv)],
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        raise AdapterFailure(
            f"adapter exited {proc.returncode} on {image.name}: {proc.stderr.strip()[:200]}"
        )
    return corpus.load_predictions(out_csv)


def cmd_run(args) -> int:
    command = shlex.split(args.adapter)
    image_dir = Path(args.image_dir)
    images = sorted(
        p for p in image_dir.iterdir() if p.suffix.lower() in IMAGE_EXTENSIONS
    )
    if not images:
        raise IoFailure(f"no images found in {image_dir}")
    records: list[ImageRecord] = []
    harness_start = time.perf_counter()
    for image in images:
        try:
            product_key = corpus.parse_filename(image.name).product_key
        except MalformedFilename:
            product_key = image.stem
        with tempfile.TemporaryDirectory() as tmp:
            out_csv = Path(tmp) / "out.csv"
            started = time.perf_counter()
            try:
                rows = _run_adapter(command, image, out_csv)
            except AdapterFailure as exc:
                if args.strict:
                    raise
                log.warning("%s; recording empty row", exc)
                records.append(
                    ImageRecord(product_key=product_key, image_filename=image.name, raw_text="")
                )
                continue
            wall = time.perf_counter() - started
        if rows:
            row = rows[0]
            records.append(
                ImageRecord(
                    product_key=product_key,
                    image_filename=image.name,
                    raw_text=row.raw_text,
                    time_seconds=row.time_seconds if row.time_seconds is not None else wall,
                )
            )
        else:
            log.warning("adapter emitted no rows for %s; recording empty row", image.name)
            records.append(
                ImageRecord(product_key=product_key, image_filename=image.name, raw_text="")
            )
    log.info(
        "processed %d images in %.2f s wall clock", len(records), time.perf_counter() - harness_start
    )
    try:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(corpus.PREDICTIONS_HEADER)
            for r in records:
                writer.writerow(
                    [
                        r.product_key,
                        r.image_filename,
                        r.raw_text,
                        "" if r.time_seconds is None else f"{r.time_seconds:.6f}",
                    ]
                )
    except OSError as exc:
        raise IoFailure(f"cannot write predictions CSV to {args.output}: {exc}") from exc
    return 0


def _report_from_dict(data: dict) -> AggregateReport:
    cov = data.get("coverage")
    coverage = None
    if cov is not None:
        coverage = CoverageReport(
            product_pct=cov["product_pct"],
            ingredients_pct=cov["ingredients_pct"],
            nfp_pct=cov["nfp_pct"],
            product_denominator=cov["denominators"]["product"],
            ingredients_denominator=cov["denominators"]["ingredients"],
            nfp_denominator=cov["denominators"]["nfp"],
        )
    return AggregateReport(
        model_name=data["model_name"],
        image_count=data["image_count"],
        means={k: v["mean"] for k, v in data["metrics"].items()},
        sds={k: v["sd"] for k, v in data["metrics"].items()},
        coverage=coverage,
        total_time_s=data["timing"]["total_s"],
        mean_time_per_image_s=data["timing"]["mean_per_image_s"],
    )


def cmd_report(args) -> int:
    reports = []
    for path in args.summaries:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        reports.extend(_report_from_dict(m) for m in doc["models"])
    sys.stdout.write(report.render_summary_tables(reports))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocrbench", description="OCR benchmarking harness for packaging text."
    )
    parser.add_argument("--config", help="JSON normalization config (or $OCRBENCH_CONFIG)")
    parser.add_argument("--strict", action="store_true", help="fail on irregular input rows")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for per-image work")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("section", help="classify and normalize raw OCR output")
    p.add_argument("input", help="predictions CSV (or a sectioned CSV to re-section)")
    p.add_argument("output", help="sectioned CSV to write")
    p.add_argument("--fuzzy", action="store_true", help="enable fuzzy fallback classification")
    p.add_argument("--fuzzy-threshold", type=int, default=None, help="partial-ratio cutoff (0-100)")
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("evaluate", help="score sectioned output against ground truth")
    p.add_argument("sectioned", help="sectioned CSV")
    p.add_argument("ground_truth", help="ground-truth CSV")
    p.add_argument("out_dir", help="directory for metrics.csv / summary.json / summary.txt")
    p.add_argument("--model-name", default="model")
    p.add_argument("--skip-missing", action="store_true", help="exclude missing predictions from means")
    p.add_argument("--timing-csv", help="raw predictions CSV supplying time_seconds")
    p.add_argument("--no-timing", action="store_true", help="emit zero timing fields")
    p.add_argument("--allow-empty", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="drive an OCR adapter over an image directory")
    p.add_argument("adapter", help="adapter command (invoked with --input/--output)")
    p.add_argument("image_dir")
    p.add_argument("output", help="predictions CSV to write")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render text tables from summary JSON files")
    p.add_argument("summaries", nargs="+")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except AdapterFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OcrBenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
