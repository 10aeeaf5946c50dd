"""Shared adapter machinery: image collection, per-image timing, and the
canonical predictions CSV protocol.

Every adapter CLI takes `--input <image-or-dir> --output <csv>` and writes
the exact header `product_id,image_filename,raw_ocr_text,time_seconds`.
A missing engine exits with code 3 and a message naming the dependency.
"""

from __future__ import annotations

import argparse
import csv
import logging
import re
import sys
import time
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
from PIL import Image

log = logging.getLogger(__name__)

PREDICTIONS_HEADER = ["product_id", "image_filename", "raw_ocr_text", "time_seconds"]
IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png")
ENGINE_UNAVAILABLE_EXIT = 3

# Product key = everything before the parenthesized image index.
_PRODUCT_KEY_RE = re.compile(r"^(?P<key>.+?) \(\d+\)$")


class EngineUnavailable(Exception):
    """The wrapped OCR engine (or one of its dependencies) is not installed."""


def product_key_for(image_path: Path) -> str:
    m = _PRODUCT_KEY_RE.match(image_path.stem)
    return m.group("key") if m else image_path.stem


def collect_images(input_path: str | Path) -> list[Path]:
    path = Path(input_path)
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.suffix.lower() in IMAGE_EXTENSIONS)
    return [path]


def run_adapter(
    input_path: str | Path,
    output_csv: str | Path,
    recognize: Callable[[np.ndarray], str],
    preprocess: Callable[[np.ndarray], np.ndarray] | None = None,
) -> int:
    """Recognize every image and write the canonical predictions CSV.

    `recognize` maps a (preprocessed) image array to text and reports its
    own inference time through the row; the recorded time_seconds is the
    wall clock around preprocess + recognize. Unreadable images and
    per-image engine errors produce an empty-text row rather than aborting.
    An empty input directory yields a header-only CSV.
    """
    rows: list[list[str]] = []
    for image_path in collect_images(input_path):
        started = time.perf_counter()
        try:
            with Image.open(image_path) as img:
                array = np.asarray(img)
            if preprocess is not None:
                array = preprocess(array)
            text = recognize(array)
        except EngineUnavailable:
            raise
        except Exception as exc:  # noqa: BLE001 - flagged row, engine errors vary
            log.warning("failed on %s: %s", image_path.name, exc)
            text = ""
        elapsed = time.perf_counter() - started
        rows.append(
            [
                product_key_for(image_path),
                image_path.name,
                text,
                f"{elapsed:.6f}",
            ]
        )
    with open(output_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTIONS_HEADER)
        writer.writerows(rows)
    return 0


def adapter_main(
    description: str,
    make_recognizer: Callable[[argparse.Namespace], Callable[[np.ndarray], str]],
    preprocess: Callable[[np.ndarray], np.ndarray] | None = None,
    extra_args: Iterable[Callable[[argparse.ArgumentParser], None]] = (),
    argv: list[str] | None = None,
) -> int:
    """Standard adapter CLI: parse args, build the engine, run, exit 3 when
    the engine is unavailable."""
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--input", required=True, help="image file or directory")
    parser.add_argument("--output", required=True, help="predictions CSV to write")
    for add in extra_args:
        add(parser)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        recognize = make_recognizer(args)
        return run_adapter(args.input, args.output, recognize, preprocess)
    except EngineUnavailable as exc:
        print(f"engine unavailable: {exc}", file=sys.stderr)
        return ENGINE_UNAVAILABLE_EXIT
