"""Ingestion of predictions and ground-truth CSV files plus the dataset
filename grammar (``YYYYMMDD_XX_YY_ZZZ (N).jpg``).

CSV dialect is RFC-4180: UTF-8, comma delimiter, double-quote escaping,
header row first. Lenient loading skips bad rows with a warning; strict
loading raises.
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path

from .errors import (
    DuplicateImage,
    EmptyGroundTruth,
    MalformedFilename,
    MalformedRow,
    MissingColumn,
    UnknownFieldType,
)
from .textnorm import FIELD_TYPES

log = logging.getLogger(__name__)

PREDICTIONS_HEADER = ["product_id", "image_filename", "raw_ocr_text", "time_seconds"]
PREDICTIONS_REQUIRED = ["product_id", "image_filename", "raw_ocr_text"]
GROUND_TRUTH_HEADER = ["product_id", "image_filename", "text_type", "gt_text"]
SECTIONED_HEADER = ["product_id", "image_filename", "text_type", "ocr_text"]

_FILENAME_RE = re.compile(
    r"^(?P<date>\d{8})_(?P<session>[^_ ]{2})_(?P<sub>[^_ ]{2})_(?P<fieldworker>[^_ ]{3})"
    r" \((?P<index>\d+)\)\.(?P<ext>jpg|jpeg|png)$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class FilenameParts:
    capture_date: date
    session_id: str
    sub_id: str
    fieldworker_id: str
    image_index: int
    product_key: str


@dataclass(frozen=True)
class ImageRecord:
    product_key: str
    image_filename: str
    raw_text: str
    time_seconds: float | None = None


@dataclass(frozen=True)
class GroundTruthEntry:
    product_key: str
    image_filename: str
    field_type: str
    gt_text: str


@dataclass(frozen=True)
class SectionedText:
    """Classified, normalized text for one (image, field) pair."""

    product_key: str
    image_filename: str
    field_type: str
    text: str


def parse_filename(name: str) -> FilenameParts:
    """Parse a dataset image filename into its components.

    The product key is the full underscore-joined prefix before the
    parenthesized image index; the extension is case-insensitive.
    """
    m = _FILENAME_RE.match(name)
    if m is None:
        raise MalformedFilename(f"filename does not match dataset grammar: {name!r}")
    try:
        capture_date = datetime.strptime(m.group("date"), "%Y%m%d").date()
    except ValueError as exc:
        raise MalformedFilename(f"invalid capture date in {name!r}") from exc
    index = int(m.group("index"))
    if index < 1:
        raise MalformedFilename(f"image index must be >= 1 in {name!r}")
    product_key = "_".join(
        (m.group("date"), m.group("session"), m.group("sub"), m.group("fieldworker"))
    )
    return FilenameParts(
        capture_date=capture_date,
        session_id=m.group("session"),
        sub_id=m.group("sub"),
        fieldworker_id=m.group("fieldworker"),
        image_index=index,
        product_key=product_key,
    )


def format_filename(parts: FilenameParts, ext: str = "jpg") -> str:
    """Inverse of parse_filename (modulo extension case)."""
    return (
        f"{parts.capture_date:%Y%m%d}_{parts.session_id}_{parts.sub_id}_"
        f"{parts.fieldworker_id} ({parts.image_index}).{ext}"
    )


def _read_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn(f"{path}: file is empty, no header row") from None
        return header, list(reader)


def _column_index(header: list[str], required: list[str], path) -> dict[str, int]:
    index = {}
    for col in required:
        if col not in header:
            raise MissingColumn(f"{path}: required column {col!r} missing from header")
        index[col] = header.index(col)
    return index


def load_predictions(path: str | Path, strict: bool = False) -> list[ImageRecord]:
    """Load a predictions CSV into ImageRecords, preserving file order.

    Lenient mode skips malformed rows with a warning; strict mode raises
    MalformedRow / DuplicateImage instead. A missing or blank time column
    yields time_seconds=None.
    """
    header, rows = _read_rows(path)
    cols = _column_index(header, PREDICTIONS_REQUIRED, path)
    time_col = header.index("time_seconds") if "time_seconds" in header else None

    records: list[ImageRecord] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            if strict:
                raise MalformedRow(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            log.warning("%s:%d: skipping row with wrong arity", path, lineno)
            continue
        filename = row[cols["image_filename"]]
        if filename in seen:
            if strict:
                raise DuplicateImage(f"{path}:{lineno}: duplicate image_filename {filename!r}")
            log.warning("%s:%d: skipping duplicate image %r", path, lineno, filename)
            continue
        time_seconds = None
        if time_col is not None and row[time_col].strip():
            try:
                time_seconds = float(row[time_col])
            except ValueError as exc:
                if strict:
                    raise MalformedRow(f"{path}:{lineno}: bad time_seconds {row[time_col]!r}") from exc
                log.warning("%s:%d: ignoring bad time_seconds %r", path, lineno, row[time_col])
        if time_seconds is not None and (time_seconds < 0 or time_seconds != time_seconds):
            if strict:
                raise MalformedRow(f"{path}:{lineno}: negative time_seconds")
            time_seconds = None
        seen.add(filename)
        records.append(
            ImageRecord(
                product_key=row[cols["product_id"]],
                image_filename=filename,
                raw_text=row[cols["raw_ocr_text"]],
                time_seconds=time_seconds,
            )
        )
    return records


def load_ground_truth(path: str | Path) -> list[GroundTruthEntry]:
    """Load and validate a ground-truth CSV.

    field_type must be exactly "ingredients" or "nfp"; gt_text must be
    non-blank; (image, field) pairs must be unique.
    """
    header, rows = _read_rows(path)
    cols = _column_index(header, GROUND_TRUTH_HEADER, path)
    entries: list[GroundTruthEntry] = []
    seen: set[tuple[str, str]] = set()
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise MalformedRow(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        field_type = row[cols["text_type"]]
        if field_type not in FIELD_TYPES:
            raise UnknownFieldType(f"{path}:{lineno}: unknown text_type {field_type!r}")
        gt_text = row[cols["gt_text"]]
        if not gt_text.strip():
            raise EmptyGroundTruth(f"{path}:{lineno}: blank gt_text")
        key = (row[cols["image_filename"]], field_type)
        if key in seen:
            raise DuplicateImage(f"{path}:{lineno}: duplicate (image, field) pair {key!r}")
        seen.add(key)
        entries.append(
            GroundTruthEntry(
                product_key=row[cols["product_id"]],
                image_filename=row[cols["image_filename"]],
                field_type=field_type,
                gt_text=gt_text,
            )
        )
    return entries


def load_sectioned(path: str | Path) -> list[SectionedText]:
    """Load a sectioned 4-field CSV produced by the section step."""
    header, rows = _read_rows(path)
    cols = _column_index(header, SECTIONED_HEADER, path)
    out = []
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise MalformedRow(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        field_type = row[cols["text_type"]]
        if field_type not in FIELD_TYPES:
            raise UnknownFieldType(f"{path}:{lineno}: unknown text_type {field_type!r}")
        out.append(
            SectionedText(
                product_key=row[cols["product_id"]],
                image_filename=row[cols["image_filename"]],
                field_type=field_type,
                text=row[cols["ocr_text"]],
            )
        )
    return out


def _sort_key(record: ImageRecord) -> tuple[int, str]:
    try:
        return parse_filename(record.image_filename).image_index, record.image_filename
    except MalformedFilename:
        return 1 << 30, record.image_filename


def group_by_product(records: list[ImageRecord]) -> dict[str, list[ImageRecord]]:
    """Group records by product key, sorting each group by image index."""
    groups: dict[str, list[ImageRecord]] = {}
    for record in records:
        groups.setdefault(record.product_key, []).append(record)
    for members in groups.values():
        members.sort(key=_sort_key)
    return groups
